# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of ``ancestor._kernels_py``; same functions, same results."""
from math import comb, factorial


cpdef tuple mono_mul(tuple m1, tuple m2):
    if not m1:
        return m2
    if not m2:
        return m1
    cdef list out = []
    cdef Py_ssize_t i = 0, j = 0, n1 = len(m1), n2 = len(m2)
    cdef int a1, k1, e1, a2, k2, e2
    while i < n1 and j < n2:
        a1, k1, e1 = m1[i]
        a2, k2, e2 = m2[j]
        if a1 < a2 or (a1 == a2 and k1 < k2):
            out.append(m1[i])
            i += 1
        elif a2 < a1 or (a1 == a2 and k2 < k1):
            out.append(m2[j])
            j += 1
        else:
            out.append((a1, k1, e1 + e2))
            i += 1
            j += 1
    while i < n1:
        out.append(m1[i])
        i += 1
    while j < n2:
        out.append(m2[j])
        j += 1
    return tuple(out)


def poly_add_into(dict dst, dict src, scale=1):
    for m, c in src.items():
        v = dst.get(m)
        v = c * scale if v is None else v + c * scale
        if v:
            dst[m] = v
        else:
            dst.pop(m, None)
    return dst


def poly_mul(dict p, dict q):
    cdef dict out = {}
    cdef tuple m
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = mono_mul(m1, m2)
            v = out.get(m)
            v = c1 * c2 if v is None else v + c1 * c2
            if v:
                out[m] = v
            else:
                del out[m]
    return out


cpdef object mono_derive(tuple m, tuple need):
    cdef object factor = 1
    cdef list out = []
    cdef Py_ssize_t j = 0, nn = len(need)
    cdef int a, k, e, d, t, na, nk
    for item in m:
        a, k, e = item
        if j < nn:
            na = need[j][0]
            nk = need[j][1]
            if na == a and nk == k:
                d = need[j][2]
                j += 1
                if d > e:
                    return None
                for t in range(e - d + 1, e + 1):
                    factor *= t
                if e > d:
                    out.append((a, k, e - d))
                continue
            if na < a or (na == a and nk < k):
                return None
        out.append(item)
    if j < nn:
        return None
    return factor, tuple(out)


def poly_apply(list groups, dict p):
    cdef dict out = {}
    cdef dict derived
    cdef tuple mm
    for need, creations in groups:
        if need:
            derived = {}
            for m, c in p.items():
                r = mono_derive(m, need)
                if r is not None:
                    f, rest = r
                    v = derived.get(rest)
                    derived[rest] = c * f if v is None else v + c * f
        else:
            derived = p
        if not derived:
            continue
        for cm, cc in creations:
            for m, c in derived.items():
                if not c:
                    continue
                mm = mono_mul(cm, m) if cm else m
                v = out.get(mm)
                v = cc * c if v is None else v + cc * c
                if v:
                    out[mm] = v
                else:
                    del out[mm]
    return out


cdef tuple _split(tuple modes):
    cdef Py_ssize_t n = len(modes), i = 0
    while i < n and modes[i][0] <= 0:
        i += 1
    return modes[:i], modes[i:]


cdef dict _counts(tuple part):
    cdef dict d = {}
    for x in part:
        d[x] = d.get(x, 0) + 1
    return d


cpdef long ann_degree(tuple modes):
    cdef long s = 0
    cdef int k
    for item in modes:
        k = item[0]
        if k > 0:
            s += 2 * k - 1
    return s


cpdef list wick_term(tuple mL, tuple mR):
    cL, aL = _split(mL)
    cR, aR = _split(mR)
    if not aL or not cR:
        return [(1, tuple(sorted(mL + mR)))]
    cdef dict ca = _counts(aL)
    cdef dict cc = _counts(cR)
    cdef list options = []
    cdef int p, a, u, v, s
    for key, u in ca.items():
        p, a = key
        partner = (1 - p, a)
        v = cc.get(partner, 0)
        if v:
            options.append((key, partner, u, v, 2 * p - 1))
    if not options:
        return [(1, tuple(sorted(mL + mR)))]
    cdef list results = [(1, ca, cc)]
    cdef list new
    for key, partner, u, v, w in options:
        new = []
        for f, ra, rc in results:
            for s in range(0, min(u, v) + 1):
                if s == 0:
                    new.append((f, ra, rc))
                    continue
                g = f * comb(u, s) * comb(v, s) * factorial(s) * w ** s
                na = dict(ra)
                nc = dict(rc)
                na[key] -= s
                nc[partner] -= s
                new.append((g, na, nc))
        results = new
    cdef list out = []
    cdef list modes
    for f, ra, rc in results:
        modes = list(cL)
        for x, n in rc.items():
            modes.extend([x] * n)
        for x, n in ra.items():
            modes.extend([x] * n)
        modes.extend(aR)
        modes.sort()
        out.append((f, tuple(modes)))
    return out


def op_product(dict A, dict B, max_ann=None):
    cdef dict out = {}
    cdef bint bounded = max_ann is not None
    cdef long W = max_ann if bounded else 0
    for (hL, mL), cL in A.items():
        for (hR, mR), cR in B.items():
            c = cL * cR
            h = hL + hR
            for f, modes in wick_term(mL, mR):
                if bounded and ann_degree(modes) > W:
                    continue
                key = (h, modes)
                v = out.get(key)
                v = c * f if v is None else v + c * f
                if v:
                    out[key] = v
                else:
                    del out[key]
    return out


def op_commutator(dict A, dict B, max_ann=None):
    cdef dict out = {}
    cdef bint bounded = max_ann is not None
    cdef long W = max_ann if bounded else 0
    cdef Py_ssize_t nterm
    for (hL, mL), cL in A.items():
        for (hR, mR), cR in B.items():
            c = cL * cR
            h = hL + hR
            nterm = len(mL) + len(mR)
            for sign, x, y in ((1, mL, mR), (-1, mR, mL)):
                for f, modes in wick_term(x, y):
                    if f == 1 and len(modes) == nterm:
                        continue
                    if bounded and ann_degree(modes) > W:
                        continue
                    key = (h, modes)
                    v = out.get(key)
                    v = sign * c * f if v is None else v + sign * c * f
                    if v:
                        out[key] = v
                    else:
                        del out[key]
    return out
