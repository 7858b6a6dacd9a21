# SPDX-License-Identifier: Apache-2.0
"""Reference implementation of Philox4x32-10 used to freeze test vectors.

Written independently of the C++ code from the published algorithm
definition (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3"):
two 32x32->64 bit multiplies per round, Weyl key schedule, 10 rounds.
Run this script to print the known-answer vectors and the derived
Box-Muller normals that tests/test_noise.cpp asserts against.
"""

M0 = 0xD2511F53
M1 = 0xCD9E8D57
W0 = 0x9E3779B9
W1 = 0xBB67AE85
MASK = 0xFFFFFFFF


def philox4x32(counter, key, rounds=10):
    c = list(counter)
    k = list(key)
    for r in range(rounds):
        p0 = M0 * c[0]
        p1 = M1 * c[2]
        hi0, lo0 = (p0 >> 32) & MASK, p0 & MASK
        hi1, lo1 = (p1 >> 32) & MASK, p1 & MASK
        c = [hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0]
        k = [(k[0] + W0) & MASK, (k[1] + W1) & MASK]
    return c


def u64(lo, hi):
    return (hi << 32) | lo


def unit_open(x):
    # (0,1] from the top 53 bits; never returns 0 so log() is finite.
    return ((x >> 11) + 1) * 2.0**-53


def normal_pair(words):
    import math
    u1 = unit_open(u64(words[0], words[1]))
    u2 = unit_open(u64(words[2], words[3]))
    r = math.sqrt(-2.0 * math.log(u1))
    return r * math.cos(2.0 * math.pi * u2), r * math.sin(2.0 * math.pi * u2)


CASES = [
    ((0, 0, 0, 0), (0, 0)),
    ((MASK, MASK, MASK, MASK), (MASK, MASK)),
    # digits of pi, the customary third known-answer case
    ((0x243F6A88, 0x85A308D3, 0x13198A2E, 0x03707344), (0xA4093822, 0x299F31D0)),
    ((7, 0, 42, 0), (1, 0)),
]

if __name__ == "__main__":
    for counter, key in CASES:
        out = philox4x32(counter, key)
        print("counter={} key={} -> {}".format(
            [hex(x) for x in counter], [hex(x) for x in key],
            [hex(x) for x in out]))
    for counter, key in CASES:
        out = philox4x32(counter, key)
        z0, z1 = normal_pair(out)
        print("normals counter={} key={} -> z0={!r} z1={!r}".format(
            counter, key, z0, z1))
