"""Bundled quiver files for the three worked examples."""

from __future__ import annotations

from importlib import resources

from ..quiverfile import QuiverFile, parse_quiver_file

NAMES = {
    "del_pezzo": "example1_del_pezzo.quiver",
    "jumping_euler": "example2_jumping_euler.quiver",
    "elliptic": "example3_elliptic.quiver",
}


def path(name: str):
    return resources.files(__name__) / NAMES[name]


def load_fixture(name: str) -> QuiverFile:
    return parse_quiver_file(path(name).read_text(encoding="utf-8"))
