"""
Settings shared by the batch commands and the HTTP routes. Values outside
BOUNDS are rejected, not clamped.
"""

DEFAULT_SETTINGS = {
    "arity": 3,
    "t_degree": 2,
    "samples": 20,
    "seed": 0,
}

# unbounded tasks: these must be given explicitly
REQUIRED_SETTINGS = {
    "t1": ("degree",),
    "obstructions": ("degree",),
    "mc-extend": ("order",),
}

BOUNDS = {
    "degree": (0, 8),
    "order": (2, 12),
    "arity": (1, 6),
    "t_degree": (0, 6),
    "samples": (1, 200),
    "cap": (0, 8),
}


def bounded(key, value):
    """int(value), raising ValueError when it falls outside BOUNDS[key]."""
    if isinstance(value, bool):
        raise ValueError(f"'{key}' must be an integer")
    v = int(value)
    if key in BOUNDS:
        lo, hi = BOUNDS[key]
        if not lo <= v <= hi:
            raise ValueError(f"'{key}' must be between {lo} and {hi}, got {v}")
    return v


def optional_bounded(data, key, default=None):
    value = data.get(key, default)
    return None if value is None else bounded(key, value)
