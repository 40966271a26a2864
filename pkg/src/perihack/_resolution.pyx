# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled dice-resolution kernel; mirror of _resolution_py."""

from libc.stdint cimport uint64_t

cdef extern from *:
    ctypedef unsigned long long uint128_t "unsigned __int128"

BACKEND = "compiled"

cdef uint64_t _GAMMA = 0x9E3779B97F4A7C15U


cdef inline uint64_t _mix(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9U
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBU
    return z ^ (z >> 31)


def winning_faces(long attack_bonus, long defense_bonus, long repeat=0):
    cdef long faces = 20 - (10 + defense_bonus + repeat - attack_bonus)
    if faces < 0:
        return 0
    if faces > 20:
        return 20
    return faces


def success_probability(long attack_bonus, long defense_bonus, long repeat=0):
    return winning_faces(attack_bonus, defense_bonus, repeat) / 20.0


def simulate_successes(long attack_bonus, long defense_bonus, long repeat,
                       long n, unsigned long long seed):
    cdef uint64_t state = <uint64_t> seed
    cdef long threshold = 10 + defense_bonus + repeat - attack_bonus
    cdef long hits = 0
    cdef long i, roll
    cdef uint64_t word
    with nogil:
        for i in range(n):
            state = state + _GAMMA
            word = _mix(state)
            roll = <long> ((<uint128_t> word * 20) >> 64) + 1
            if roll > threshold:
                hits += 1
    return hits


def probability_grid(long min_bonus, long max_bonus, long repeat=0):
    cdef long a, d
    return [
        [success_probability(a, d, repeat) for d in range(min_bonus, max_bonus + 1)]
        for a in range(min_bonus, max_bonus + 1)
    ]
