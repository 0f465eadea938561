"""Pure-Python Zhang-Shasha ordered tree edit distance (unit costs).

Fallback for the compiled kernel in ted_cy.pyx; both share this signature.
Inputs are postorder arrays: integer labels, leftmost-leaf-descendant indices
and sorted keyroot indices for each tree.
"""

from __future__ import annotations

BACKEND = "pure-python"


def tree_distance(
    la: list[int],
    lla: list[int],
    kra: list[int],
    lb: list[int],
    llb: list[int],
    krb: list[int],
) -> int:
    na, nb = len(la), len(lb)
    if na == 0 or nb == 0:
        return na + nb
    td = [[0] * nb for _ in range(na)]
    for i in kra:
        li = lla[i]
        for j in krb:
            lj = llb[j]
            m = i - li + 2
            n = j - lj + 2
            fd = [[0] * n for _ in range(m)]
            ioff = li - 1
            joff = lj - 1
            for x in range(1, m):
                fd[x][0] = fd[x - 1][0] + 1
            for y in range(1, n):
                fd[0][y] = fd[0][y - 1] + 1
            for x in range(1, m):
                row = fd[x]
                prev = fd[x - 1]
                xi = x + ioff
                for y in range(1, n):
                    yj = y + joff
                    if li == lla[xi] and lj == llb[yj]:
                        best = prev[y] + 1
                        alt = row[y - 1] + 1
                        if alt < best:
                            best = alt
                        alt = prev[y - 1] + (0 if la[xi] == lb[yj] else 1)
                        if alt < best:
                            best = alt
                        row[y] = best
                        td[xi][yj] = best
                    else:
                        best = prev[y] + 1
                        alt = row[y - 1] + 1
                        if alt < best:
                            best = alt
                        alt = fd[lla[xi] - 1 - ioff][llb[yj] - 1 - joff] + td[xi][yj]
                        if alt < best:
                            best = alt
                        row[y] = best
    return td[na - 1][nb - 1]
