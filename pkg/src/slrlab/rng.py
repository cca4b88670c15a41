"""Deterministic random-stream derivation.

All randomness in the library flows from a single 64-bit master seed.  Each
consumer derives its own independent stream from (master seed, purpose tag,
chunk index), so results never depend on how work is split across workers
or on the order in which studies run.
"""

import hashlib

import numpy as np


def purpose_key(purpose: str) -> int:
    """Stable 64-bit key for a purpose tag."""
    digest = hashlib.sha256(purpose.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def derive_rng(master_seed: int, purpose: str, chunk: int = 0) -> np.random.Generator:
    """Independent generator for (master_seed, purpose, chunk)."""
    seq = np.random.SeedSequence([int(master_seed), purpose_key(purpose), int(chunk)])
    return np.random.default_rng(seq)
