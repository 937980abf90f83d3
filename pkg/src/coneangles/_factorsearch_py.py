"""Pure-Python kernel for the permutation factorization search.

Finds sigma_inf and single-cycle factors tau_1 .. tau_s with

    sigma0 o sigma_inf o tau_1 o ... o tau_s == identity

and the whole collection generating a transitive group.  This is the hot
loop behind the branch-data brute force; the compiled twin in
``_factorsearch.pyx`` implements the identical algorithm.

Pruning (all conditions are necessary, so the search stays complete):
  * transposition metric: the remaining factors provide at most
    sum (k_j - 1) transpositions, and undoing the running product needs
    exactly d - (number of cycles), with matching parity;
  * connectivity: the factors still to come can merge at most
    sum (k_j - 1) orbit pairs;
  * a memo of failed (level, product, orbit partition) states.
"""

from __future__ import annotations

__all__ = ["search"]


def _compose(p, q):
    """Apply q first, then p."""
    return tuple(p[j] for j in q)


def _cycle_count(p):
    seen = [False] * len(p)
    count = 0
    for i in range(len(p)):
        if not seen[i]:
            count += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = p[j]
    return count


def _canonical_labels(labels):
    remap = {}
    out = []
    for x in labels:
        if x not in remap:
            remap[x] = len(remap)
        out.append(remap[x])
    return tuple(out)


def _merge_components(labels, points):
    targets = {labels[pt] for pt in points}
    if len(targets) == 1:
        return labels, max(labels) + 1
    keep = min(targets)
    merged = tuple(keep if x in targets else x for x in labels)
    merged = _canonical_labels(merged)
    return merged, max(merged) + 1


def _base_components(d, perms):
    labels = list(range(d))

    def find(x):
        while labels[x] != x:
            labels[x] = labels[labels[x]]
            x = labels[x]
        return x

    for p in perms:
        for i, j in enumerate(p):
            ri, rj = find(i), find(j)
            if ri != rj:
                labels[max(ri, rj)] = min(ri, rj)
    return _canonical_labels(find(i) for i in range(d))


def search(d, sigma0, candidates, extras, tau_classes):
    """Deterministic exhaustive search; returns (candidate_index, taus) or None.

    candidates: ordered sigma_inf choices (permutation tuples).
    extras: cycle lengths of the tau factors, non-increasing.
    tau_classes: per level, an ordered tuple of (perm, support) pairs where
        support lists the points moved by the cycle.
    """
    s = len(extras)
    budgets = [0] * (s + 1)
    for i in range(s - 1, -1, -1):
        budgets[i] = budgets[i + 1] + (extras[i] - 1)
    chosen = [None] * s

    def dfs(level, pi, comp, ncomp, memo):
        rem = budgets[level]
        need = d - _cycle_count(pi)
        if need > rem or (rem - need) & 1:
            return False
        if ncomp - 1 > rem:
            return False
        if level == s:
            return ncomp == 1
        key = (level, pi, comp)
        if key in memo:
            return False
        for tau, support in tau_classes[level]:
            new_comp, new_ncomp = _merge_components(comp, support)
            if dfs(level + 1, _compose(pi, tau), new_comp, new_ncomp, memo):
                chosen[level] = tau
                return True
        memo.add(key)
        return False

    for index, sigma_inf in enumerate(candidates):
        start = _compose(sigma0, sigma_inf)
        comp = _base_components(d, (sigma0, sigma_inf))
        if dfs(0, start, comp, max(comp) + 1, set()):
            return index, tuple(chosen)
    return None
