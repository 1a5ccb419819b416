"""Text export of relation sets: labeled plain lines or a Singular script."""

from __future__ import annotations

from .combinatorics import IndexSubset, k_subsets
from .polynomials import RelationPolynomial, canonical_string
from .relations import RelationSet
from .scalars import signed_term


def _dims_text(rels: RelationSet) -> str:
    return " ".join(f"{v}={rels.dims[v]}" for v in rels.rep.quiver.vertices)


def cas_variable(v: IndexSubset, labels) -> str:
    if not v.members:
        return f"D_{v.vertex}_empty"
    return "D_" + "_".join(str(labels[v.vertex][i - 1]) for i in v.members)


def ambient_variables(rels: RelationSet) -> list[IndexSubset]:
    rep = rels.rep
    out = []
    for v in rep.quiver.vertices:
        out.extend(k_subsets(v, rep.dim(v), rels.dims[v]))
    return out


def cas_polynomial(poly: RelationPolynomial, labels) -> str:
    if poly.is_zero():
        return "0"
    parts: list[str] = []
    for mono, c in poly.items():
        factors = "*".join(cas_variable(v, labels) for v in mono)
        for r, params in c.render_terms():
            body = "*".join(x for x in (params, factors) if x)
            parts.append(signed_term(r, body, first=not parts))
    return " ".join(parts)


def export_relations(rels: RelationSet, fmt: str = "plain", labeling: str = "global") -> str:
    """Render ``rels`` as ``plain`` text or as a ``cas`` (Singular) script."""
    rep = rels.rep
    labels = rep.global_labels()
    shown = labels if labeling == "global" else None
    if fmt == "plain":
        lines = [f"# {rep.name}: e = ({_dims_text(rels)}), {len(rels)} relation(s)"]
        for label, poly in rels:
            lines.append(f"{label.text(shown)}: {canonical_string(poly, shown)}")
        return "\n".join(lines) + "\n"
    if fmt == "cas":
        names = list(rep.parameters) + [cas_variable(v, labels) for v in ambient_variables(rels)]
        lines = [
            f"// {rep.name}: e = ({_dims_text(rels)}), {len(rels)} relation(s)",
            f"ring R = 0, ({', '.join(names)}), dp;",
        ]
        if len(rels):
            gens = [cas_polynomial(poly, labels) for poly in rels.polynomials]
            lines.append("ideal I =")
            lines += [f"  {g}," for g in gens[:-1]] + [f"  {gens[-1]};"]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown export format {fmt!r}")
