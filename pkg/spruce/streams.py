"""
Counter-based random streams for episodes.

Every draw is a pure function of ``(master_seed, rep, tag, index, round)``:
rounds are grouped into chunks of `CHUNK` and each chunk gets its own Philox
generator seeded by ``SeedSequence(master_seed, spawn_key=(rep, tag, index,
chunk))``. A chunk is sampled in one vectorized call and cached, so random
access to any round costs at most one chunk draw and episodes never depend on
how many other episodes ran before them, or where.

Tags: `OUTCOME` (index 0 is the RCT control outcome, index ``a`` is arm
``a``), `POLICY` (randomized allocation), `ASSIGNMENT` (RCT treatment flags).
"""

import numpy as np


CHUNK = 1024

OUTCOME = 0
POLICY = 1
ASSIGNMENT = 2


def generator(master_seed, rep, tag, index=0, chunk=0):
    seq = np.random.SeedSequence(int(master_seed), spawn_key=(int(rep), tag, int(index), int(chunk)))
    return np.random.Generator(np.random.Philox(seq))


class RoundStream(object):
    """
    Per-round values of one ``(rep, tag, index)`` stream.

    ``sampler(generator, size)`` returns ``size`` values (an array whose
    first axis is the round within the chunk).
    """
    def __init__(self, master_seed, rep, tag, index, sampler):
        self.key = (master_seed, rep, tag, index)
        self.sampler = sampler
        self._chunk = None
        self._block = None

    def draw(self, n):
        """
        Value for round ``n`` (numbered from 1).
        """
        chunk, offset = divmod(n - 1, CHUNK)
        if chunk != self._chunk:
            master_seed, rep, tag, index = self.key
            self._block = self.sampler(generator(master_seed, rep, tag, index, chunk), CHUNK)
            self._chunk = chunk
        return self._block[offset]


class PolicyStream(object):
    """
    Random source handed to randomized policies; ``integers`` is keyed by the
    current round so the draw for round ``n`` never depends on earlier calls.
    """
    def __init__(self, master_seed, rep):
        self._uniform = RoundStream(master_seed, rep, POLICY, 0, lambda g, size: g.random(size))
        self.n = 1

    def at(self, n):
        self.n = n
        return self

    def integers(self, low, high):
        u = self._uniform.draw(self.n)
        return low + min(int(u * (high - low)), high - low - 1)


def assignment_stream(master_seed, rep, pi):
    """
    Treatment indicators ``Z_n ~ Bernoulli(pi)`` as ints.
    """
    return RoundStream(master_seed, rep, ASSIGNMENT, 0, lambda g, size: (g.random(size) < pi).astype(np.int64))
