"""Approximate weighted shortest paths in 3-d tetrahedral domains."""
try:
    from ._wsp3d import Engine, Mesh, bipyramid, single_tet, two_tets  # noqa: F401
except ImportError:  # build-tree layout keeps the extension on sys.path
    from _wsp3d import Engine, Mesh, bipyramid, single_tet, two_tets  # noqa: F401
