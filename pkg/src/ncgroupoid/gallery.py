"""Bundled example space configs, usable anywhere a config file is.

The command line tools accept these names directly in place of a path,
and ``verify all`` runs the full property suite over every one of them.
"""

from __future__ import annotations

import copy

_CONFIGS: dict[str, dict] = {
    # one class containing everything: the constants-only structure on
    # three weighted points in the plane
    "total_type_3pt": {
        "name": "total_type_3pt",
        "dimension": 2,
        "points": [
            {"id": 0, "coords": [0.0, 0.0], "weight": 1.0},
            {"id": 1, "coords": [1.0, 0.0], "weight": 1.0},
            {"id": 2, "coords": [0.0, 1.0], "weight": 2.0},
        ],
        "generators": [],
        "compare_mode": "exact",
    },
    # the first coordinate glues the grid into its two columns
    "grid_2x2": {
        "name": "grid_2x2",
        "dimension": 2,
        "points": [
            {"id": 0, "coords": [0.0, 0.0], "weight": 1.0},
            {"id": 1, "coords": [0.0, 1.0], "weight": 1.0},
            {"id": 2, "coords": [1.0, 0.0], "weight": 1.0},
            {"id": 3, "coords": [1.0, 1.0], "weight": 1.0},
        ],
        "generators": [{"name": "pi1", "expr": "x1"}],
        "compare_mode": "exact",
    },
    # five points on a line, fully separated: the relation is the diagonal
    "hausdorff_line_5pt": {
        "name": "hausdorff_line_5pt",
        "dimension": 1,
        "points": [
            {"id": 0, "coords": [0.0], "weight": 1.0},
            {"id": 1, "coords": [1.0], "weight": 1.0},
            {"id": 2, "coords": [2.0], "weight": 1.0},
            {"id": 3, "coords": [3.0], "weight": 1.0},
            {"id": 4, "coords": [4.0], "weight": 1.0},
        ],
        "generators": [{"name": "coord", "expr": "x1"}],
        "compare_mode": "exact",
    },
}


def gallery() -> list[str]:
    """Names of the bundled configs."""
    return list(_CONFIGS)


def gallery_config(name: str) -> dict:
    """A deep copy of one bundled config, by name."""
    if name not in _CONFIGS:
        raise KeyError(f"no bundled config named {name!r}; have {list(_CONFIGS)}")
    return copy.deepcopy(_CONFIGS[name])
