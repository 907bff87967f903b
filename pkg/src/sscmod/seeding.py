"""Counter-based random streams keyed by integer tuples.

Every stream is a Philox generator seeded from a ``SeedSequence`` over the
key, so (seed, tag...) pairs give independent, reproducible streams that do
not depend on process layout.
"""

import numpy as np

# stream tags
INSTANCE = 0
MCMC = 1
REALIZATION = 2


def make_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *map(int, key)])))


def derive_seed(*key: int) -> int:
    """A stable 63-bit seed from an integer key."""
    state = np.random.SeedSequence([int(k) for k in key]).generate_state(2, dtype=np.uint32)
    return (int(state[0]) << 31) ^ int(state[1])
