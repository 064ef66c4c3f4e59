"""Slow reference implementations, written without reusing package code."""

import math
from collections import Counter


def window_patterns(values, n):
    """Rank tuple of every window, found by explicitly sorting positions."""
    return Counter(sort_ranks(values[s:s + n]) for s in range(len(values) - n + 1))


def shannon_bits(counts):
    total = sum(counts)
    h = 0.0
    for c in counts:
        if c:
            p = c / total
            h -= p * math.log2(p)
    return h


def mutual_information_bits(P):
    k, l = len(P), len(P[0])
    row = [sum(P[i][j] for j in range(l)) for i in range(k)]
    col = [sum(P[i][j] for i in range(k)) for j in range(l)]
    mi = 0.0
    for i in range(k):
        for j in range(l):
            if P[i][j] > 0:
                mi += P[i][j] * math.log2(P[i][j] / (row[i] * col[j]))
    return mi


def bin_of(v, edges):
    """Half-open bins [e_{i-1}, e_i), last bin closed."""
    b = 0
    for e in edges:
        if v >= e:
            b += 1
    return b


def count_matrix(x, y, row_edges, col_edges):
    A = [[0] * (len(col_edges) + 1) for _ in range(len(row_edges) + 1)]
    for a, b in zip(x, y):
        A[bin_of(a, row_edges)][bin_of(b, col_edges)] += 1
    return A


def sort_ranks(window):
    order = sorted(range(len(window)), key=lambda i: (window[i], i))
    ranks = [0] * len(window)
    for r, i in enumerate(order):
        ranks[i] = r
    return tuple(ranks)


class WindowSorter(dict):
    """``window_patterns`` with the per-window sort cached.

    Exhaustive enumeration over a small alphabet revisits the same few
    windows millions of times; each distinct window is still sorted
    explicitly, once.
    """

    def __missing__(self, window):
        r = self[window] = sort_ranks(window)
        return r

    def ranks(self, window):
        return self[tuple(window)]

    def patterns(self, values, n):
        windows = zip(*(values[k:] for k in range(n)))
        return Counter(map(self.__getitem__, windows))
