"""Named counter-based random streams.

Each subsystem draws from its own Philox stream keyed by (seed, name), so
adding a log line or an extra draw in one subsystem never perturbs another,
and a sweep's per-seed episodes are fully independent.
"""

import hashlib

import numpy as np


def stream(seed: int, name: str) -> np.random.Generator:
    digest = hashlib.sha256(f"{seed}:{name}".encode("utf-8")).digest()
    key = int.from_bytes(digest[:16], "little")
    return np.random.Generator(np.random.Philox(key=key))
