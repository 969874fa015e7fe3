"""Deterministic seed derivation.

All randomness in a run flows from one root seed. Stage seeds are derived by
hashing the root seed together with stage labels, so adding a stage never
shifts the streams of the others.
"""

import hashlib


def derive_seed(root_seed: int, *labels: object) -> int:
    """Derive a child seed from ``root_seed`` and a sequence of labels.

    The same (root_seed, labels) always yields the same child seed, on any
    platform. Returns a non-negative int that fits in 63 bits.
    """
    text = str(int(root_seed)) + "".join("|" + str(part) for part in labels)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little") >> 1
