# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Zhang-Shasha ordered tree edit distance (unit costs).

Same signature as the pure-Python kernel in ted_py; selected at import by
proofsynth.treedist when available.
"""

from libc.stdlib cimport free, malloc

BACKEND = "cython"


cdef int* _copy(list xs) except NULL:
    cdef int n = len(xs)
    cdef int* out = <int*> malloc((n if n > 0 else 1) * sizeof(int))
    if out == NULL:
        raise MemoryError()
    cdef int i
    for i in range(n):
        out[i] = xs[i]
    return out


def tree_distance(list la, list lla, list kra, list lb, list llb, list krb):
    cdef int na = len(la)
    cdef int nb = len(lb)
    if na == 0 or nb == 0:
        return na + nb
    cdef int* A = _copy(la)
    cdef int* AL = _copy(lla)
    cdef int* B = _copy(lb)
    cdef int* BL = _copy(llb)
    cdef int* td = <int*> malloc(na * nb * sizeof(int))
    cdef int* fd = <int*> malloc((na + 1) * (nb + 1) * sizeof(int))
    if td == NULL or fd == NULL:
        free(A); free(AL); free(B); free(BL)
        if td != NULL:
            free(td)
        if fd != NULL:
            free(fd)
        raise MemoryError()
    cdef int fstride = nb + 1
    cdef int i, j, li, lj, m, n, ioff, joff, x, y, xi, yj, best, alt, ki, kj
    cdef int result
    try:
        for ki in range(len(kra)):
            i = kra[ki]
            li = AL[i]
            for kj in range(len(krb)):
                j = krb[kj]
                lj = BL[j]
                m = i - li + 2
                n = j - lj + 2
                ioff = li - 1
                joff = lj - 1
                fd[0] = 0
                for x in range(1, m):
                    fd[x * fstride] = fd[(x - 1) * fstride] + 1
                for y in range(1, n):
                    fd[y] = fd[y - 1] + 1
                for x in range(1, m):
                    xi = x + ioff
                    for y in range(1, n):
                        yj = y + joff
                        if li == AL[xi] and lj == BL[yj]:
                            best = fd[(x - 1) * fstride + y] + 1
                            alt = fd[x * fstride + y - 1] + 1
                            if alt < best:
                                best = alt
                            alt = fd[(x - 1) * fstride + y - 1] + (0 if A[xi] == B[yj] else 1)
                            if alt < best:
                                best = alt
                            fd[x * fstride + y] = best
                            td[xi * nb + yj] = best
                        else:
                            best = fd[(x - 1) * fstride + y] + 1
                            alt = fd[x * fstride + y - 1] + 1
                            if alt < best:
                                best = alt
                            alt = fd[(AL[xi] - 1 - ioff) * fstride + BL[yj] - 1 - joff] + td[xi * nb + yj]
                            if alt < best:
                                best = alt
                            fd[x * fstride + y] = best
        result = td[(na - 1) * nb + nb - 1]
    finally:
        free(A); free(AL); free(B); free(BL); free(td); free(fd)
    return result
