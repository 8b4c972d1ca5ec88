__all__ = [
    "__version__",
    "utils",
    "Permutation",
    "GroupSpec",
    "Group",
    "CommGraph",
    "enumerate_group",
    "parse_entry",
    "analyze",
    "set_debug",
]

import logging

from . import utils
from ._version import __version__
from .corpus import parse_entry
from .graph import CommGraph
from .group import Group, GroupSpec, Permutation, enumerate_group

logger = logging.getLogger(__name__)


def analyze(entry, settings=None):
    """Build a corpus entry such as "a5" or "file:g.json" and report on its graph."""
    settings = utils.resolve_settings(settings)
    group = parse_entry(entry).build(max_order=settings["max_order"])
    return CommGraph(group, settings).report()


def set_debug(debug=0):
    logger.setLevel(logging.DEBUG if debug else logging.WARNING)


set_debug(0)
