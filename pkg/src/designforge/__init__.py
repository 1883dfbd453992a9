"""designforge: exact screening and exhaustive construction of block-transitive
2-(k^2, k, lambda) designs with prescribed permutation-group actions."""

from importlib.resources import files

__version__ = "0.1.0"


def data_path(name: str) -> str:
    """Path to a packaged generator file, e.g. data_path("psl33.gens")."""
    return str(files("designforge").joinpath("data", name))
