"""Single-field mutations of a certificate for tamper tests."""

from __future__ import annotations

import copy
import random
from typing import Any, Iterator

# provenance carries no claim; the seed is free-form metadata
SKIP = {("provenance", "seed")}


def numeric_paths(obj: Any, path: tuple = ()) -> Iterator[tuple]:
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from numeric_paths(v, path + (k,))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from numeric_paths(v, path + (i,))
    elif isinstance(obj, int) and not isinstance(obj, bool):
        yield path
    elif isinstance(obj, str):
        try:
            int(obj, 10)
        except ValueError:
            return
        if path not in SKIP:
            yield path


def _get(obj, path):
    for k in path:
        obj = obj[k]
    return obj


def _set(obj, path, value):
    for k in path[:-1]:
        obj = obj[k]
    obj[path[-1]] = value


def mutate(cert: dict, rng: random.Random) -> tuple[dict, tuple, str, str]:
    """Copy of cert with one numeric field changed; returns (copy, path, old, new)."""
    paths = list(numeric_paths(cert))
    path = rng.choice(paths)
    old = _get(cert, path)
    v = int(old) if isinstance(old, str) else old
    while True:
        op = rng.randrange(5)
        if op == 0:
            w = v + 1
        elif op == 1:
            w = v - 1
        elif op == 2:
            w = v + rng.randint(2, 10**6)
        elif op == 3:
            w = -v
        else:
            w = v * rng.choice([2, 3, 10])
        if w != v:
            break
    out = copy.deepcopy(cert)
    new = str(w) if isinstance(old, str) else w
    _set(out, path, new)
    return out, path, str(old), str(new)
