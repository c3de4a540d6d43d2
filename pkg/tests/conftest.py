"""Shared corpus fixtures.

Meshes are generated procedurally (no binary assets) and cached for the
whole session; encoded streams for the default configuration are cached
too, since encoding the larger meshes dominates suite runtime.
"""

import pytest

from meshpress import codec, shapes

# name -> mesh factory; spans the codec's input space: minimal inputs,
# regular subdivision surfaces, a bumpy scanned-style blob, an open
# patch with boundary, an irregular hull and a CAD-style solid.
CORPUS_FACTORIES = {
    "triangle": shapes.triangle,
    "tetrahedron": shapes.tetrahedron,
    "grid": lambda: shapes.grid_patch(9, 9),
    "icosphere": lambda: shapes.icosphere(3),
    "bumpy": shapes.bumpy_sphere,
    "convex": shapes.random_convex,
    "cad": shapes.cad_solid,
}

CORPUS_NAMES = list(CORPUS_FACTORIES)

# meshes large enough for the adaptive-precision comparison
LARGE_NAMES = ["bumpy", "cad"]


@pytest.fixture(scope="session")
def corpus():
    """name -> TriMesh for every corpus mesh."""
    return {name: make() for name, make in CORPUS_FACTORIES.items()}


@pytest.fixture(scope="session")
def encoded(corpus):
    """name -> (stream, report) for the default encoder configuration."""
    out = {}
    for name, mesh in corpus.items():
        out[name] = codec.encode(mesh, codec.EncodeConfig())
    return out


@pytest.fixture(scope="session")
def hierarchies(corpus):
    """name -> list[LevelRecord] under the default WGC configuration."""
    from meshpress import build_hierarchy

    return {name: build_hierarchy(mesh) for name, mesh in corpus.items()}
