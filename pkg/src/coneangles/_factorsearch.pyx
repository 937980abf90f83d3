# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel for the permutation factorization search.

Mirrors ``_factorsearch_py.search`` exactly: same pruning, same
deterministic order, same results.  Supports degrees up to 8 (the memo
packs a permutation and an orbit labelling into one 64-bit key at 3 bits
per point); the wrapper in ``hurwitz`` never sends larger degrees to the
compiled kernel because brute-force certification is capped well below.
"""

from libc.string cimport memcpy

MAX_DEGREE = 8

ctypedef unsigned long long u64


cdef int _cycle_count(int* p, int d) nogil:
    cdef int seen = 0  # bitmask, d <= 8
    cdef int count = 0
    cdef int i, j
    for i in range(d):
        if not (seen >> i) & 1:
            count += 1
            j = i
            while not (seen >> j) & 1:
                seen |= 1 << j
                j = p[j]
    return count


cdef void _canonical_labels(int* labels, int d) nogil:
    cdef int remap[8]
    cdef int i, nxt = 0
    for i in range(8):
        remap[i] = -1
    for i in range(d):
        if remap[labels[i]] < 0:
            remap[labels[i]] = nxt
            nxt += 1
        labels[i] = remap[labels[i]]


cdef int _merge_components(int* src, int* dst, int d, int* support, int slen) nogil:
    """dst = canonical labels after merging src over the support; returns count."""
    cdef int keep = src[support[0]]
    cdef int i, lab
    cdef int hit = 0  # bitmask of labels to merge
    for i in range(slen):
        lab = src[support[i]]
        hit |= 1 << lab
        if lab < keep:
            keep = lab
    for i in range(d):
        if (hit >> src[i]) & 1:
            dst[i] = keep
        else:
            dst[i] = src[i]
    _canonical_labels(dst, d)
    cdef int count = 0
    for i in range(d):
        if dst[i] > count:
            count = dst[i]
    return count + 1


cdef u64 _state_key(int level, int* pi, int* comp, int d) nogil:
    cdef u64 key = <u64>level
    cdef int i
    for i in range(d):
        key = (key << 3) | <u64>pi[i]
    for i in range(d):
        key = (key << 3) | <u64>comp[i]
    return key


cdef class _Search:
    cdef int d, s, ncand
    cdef int sigma0[8]
    cdef int budgets[33]
    cdef list tau_perms      # per level: flat int array of perms
    cdef list tau_supports   # per level: (flat supports, per-tau length)
    cdef int[:, ::1] candidates
    cdef int chosen[32]
    cdef set memo

    def __init__(self, int d, sigma0, candidates, extras, tau_classes):
        cdef int i, j
        self.d = d
        self.s = len(extras)
        if self.s > 32:
            raise ValueError("too many factors for the compiled kernel")
        for i in range(d):
            self.sigma0[i] = sigma0[i]
        self.budgets[self.s] = 0
        for i in range(self.s - 1, -1, -1):
            self.budgets[i] = self.budgets[i + 1] + (extras[i] - 1)
        self.ncand = len(candidates)
        import numpy as np
        cand = np.empty((max(self.ncand, 1), d), dtype=np.intc)
        for i in range(self.ncand):
            for j in range(d):
                cand[i, j] = candidates[i][j]
        self.candidates = cand
        self.tau_perms = []
        self.tau_supports = []
        for level in range(self.s):
            cls = tau_classes[level]
            perms = np.empty((len(cls), d), dtype=np.intc)
            slen = extras[level]
            sups = np.empty((len(cls), slen), dtype=np.intc)
            for i, (perm, support) in enumerate(cls):
                for j in range(d):
                    perms[i, j] = perm[j]
                for j in range(slen):
                    sups[i, j] = support[j]
            self.tau_perms.append(perms)
            self.tau_supports.append(sups)

    cdef bint _dfs(self, int level, int* pi, int* comp, int ncomp):
        cdef int d = self.d
        cdef int rem = self.budgets[level]
        cdef int need = d - _cycle_count(pi, d)
        if need > rem or (rem - need) & 1:
            return False
        if ncomp - 1 > rem:
            return False
        if level == self.s:
            return ncomp == 1
        cdef u64 key = _state_key(level, pi, comp, d)
        if key in self.memo:
            return False
        cdef int[:, ::1] perms = self.tau_perms[level]
        cdef int[:, ::1] sups = self.tau_supports[level]
        cdef int slen = sups.shape[1]
        cdef int nperm = perms.shape[0]
        cdef int new_pi[8]
        cdef int new_comp[8]
        cdef int t, j, new_ncomp
        for t in range(nperm):
            for j in range(d):
                new_pi[j] = pi[perms[t, j]]
            new_ncomp = _merge_components(comp, new_comp, d, &sups[t, 0], slen)
            if self._dfs(level + 1, new_pi, new_comp, new_ncomp):
                self.chosen[level] = t
                return True
        self.memo.add(key)
        return False

    def run(self):
        cdef int d = self.d
        cdef int ci, i, j, ncomp
        cdef int start[8]
        cdef int comp[8]
        cdef int parent[8]
        cdef int ri, rj
        for ci in range(self.ncand):
            for i in range(d):
                start[i] = self.sigma0[self.candidates[ci, i]]
            # union-find over the cycles of sigma0 and the candidate
            for i in range(d):
                parent[i] = i
            for i in range(d):
                for j in range(2):
                    rj = self.sigma0[i] if j == 0 else self.candidates[ci, i]
                    ri = i
                    while parent[ri] != ri:
                        ri = parent[ri]
                    while parent[rj] != rj:
                        rj = parent[rj]
                    if ri != rj:
                        parent[max(ri, rj)] = min(ri, rj)
            for i in range(d):
                ri = i
                while parent[ri] != ri:
                    ri = parent[ri]
                comp[i] = ri
            _canonical_labels(comp, d)
            ncomp = 0
            for i in range(d):
                if comp[i] > ncomp:
                    ncomp = comp[i]
            ncomp += 1
            self.memo = set()
            if self._dfs(0, start, comp, ncomp):
                taus = []
                for i in range(self.s):
                    perms = self.tau_perms[i]
                    taus.append(tuple(int(perms[self.chosen[i], j]) for j in range(d)))
                return ci, tuple(taus)
        return None


def search(d, sigma0, candidates, extras, tau_classes):
    """Compiled twin of ``_factorsearch_py.search``; same contract."""
    if d > MAX_DEGREE:
        from coneangles import _factorsearch_py
        return _factorsearch_py.search(d, sigma0, candidates, extras, tau_classes)
    if not candidates:
        return None
    return _Search(d, sigma0, candidates, extras, tau_classes).run()
