"""bibnet: matrix and graph methods for bibliometric networks."""

from importlib import resources

__version__ = "0.1.0"


def fixture_path(name: str):
    """Path of a bundled data file (``nrays12.tsv``, ``journals5.csv``, ``authors.tsv``)."""
    return resources.files("bibnet").joinpath("data", name)
