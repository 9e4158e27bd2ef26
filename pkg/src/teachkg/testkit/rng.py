"""SplitMix64, a portable 64-bit generator.

State update and output mixing (all arithmetic mod 2**64)::

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

Bounded draws use Lemire's multiply-shift: ``(next() * n) >> 64``.  The
slight bias for huge ``n`` is irrelevant here and keeps ports trivial.
"""

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed):
        self.state = seed & MASK

    def next(self):
        self.state = (self.state + GOLDEN) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def below(self, n):
        """Uniform-ish integer in [0, n)."""
        if n <= 0:
            raise ValueError("n must be positive")
        return (self.next() * n) >> 64

    def random(self):
        """Float in [0, 1) from the top 53 bits."""
        return (self.next() >> 11) / float(1 << 53)

    def chance(self, p):
        return self.random() < p

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def shuffle(self, items):
        """In-place Fisher-Yates, walking down from the end."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items

    def sample(self, seq, k):
        pool = list(seq)
        self.shuffle(pool)
        return pool[:k]

    def fork(self):
        """Independent child stream seeded from this one."""
        return SplitMix64(self.next())
