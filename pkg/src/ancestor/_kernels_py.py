"""Pure-Python hot kernels.

Polynomials are dicts ``{monomial: coeff}`` where a monomial is a sorted tuple
of ``(sector, level, exponent)`` triples.  Mode-operator terms are dicts
``{(hbar_power, modes): coeff}`` where ``modes`` is a sorted tuple of
``(mode, sector)`` pairs; sorting by mode puts creations (mode <= 0) left of
annihilations (mode >= 1), which is the normal order.

``ancestor._kernels`` (Cython) implements the same functions with the same
signatures; ``ancestor.kernels`` picks one at import.
"""
from math import comb, factorial


def mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    n1, n2 = len(m1), len(m2)
    while i < n1 and j < n2:
        a1, k1, e1 = m1[i]
        a2, k2, e2 = m2[j]
        if (a1, k1) < (a2, k2):
            out.append(m1[i])
            i += 1
        elif (a2, k2) < (a1, k1):
            out.append(m2[j])
            j += 1
        else:
            out.append((a1, k1, e1 + e2))
            i += 1
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


def poly_add_into(dst, src, scale=1):
    for m, c in src.items():
        v = dst.get(m)
        v = c * scale if v is None else v + c * scale
        if v:
            dst[m] = v
        else:
            dst.pop(m, None)
    return dst


def poly_mul(p, q):
    out = {}
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


def mono_derive(m, need):
    """Apply the derivative multi-index ``need`` (a monomial) to monomial ``m``.

    Returns ``(falling factorial factor, remaining monomial)`` or ``None`` when
    the derivative kills the monomial.
    """
    factor = 1
    out = []
    j = 0
    nn = len(need)
    for a, k, e in m:
        if j < nn and need[j][0] == a and need[j][1] == k:
            d = need[j][2]
            j += 1
            if d > e:
                return None
            for t in range(e - d + 1, e + 1):
                factor *= t
            if e > d:
                out.append((a, k, e - d))
        elif j < nn and (need[j][0], need[j][1]) < (a, k):
            return None
        else:
            out.append((a, k, e))
    if j < nn:
        return None
    return factor, tuple(out)


def poly_apply(groups, p):
    """Apply a grouped differential operator to polynomial ``p``.

    ``groups`` is a list of ``(need, creations)`` where ``need`` is a
    derivative multi-index and ``creations`` a list of ``(monomial, coeff)``:
    the operator is ``sum coeff * monomial * d^need``.
    """
    out = {}
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


def _split(modes):
    """Split a normal-ordered mode tuple into creation and annihilation parts."""
    n = len(modes)
    i = 0
    while i < n and modes[i][0] <= 0:
        i += 1
    return modes[:i], modes[i:]


def _counts(part):
    d = {}
    for x in part:
        d[x] = d.get(x, 0) + 1
    return d


def ann_degree(modes):
    s = 0
    for k, a in modes:
        if k > 0:
            s += 2 * k - 1
    return s


def wick_term(mL, mR):
    """Normal-ordered expansion of the product of two normal-ordered monomials.

    Returns a list of ``(factor, modes)``.  An annihilator ``J_p`` contracts
    with a creator ``J_{1-p}`` of the same sector with factor ``2p - 1``.
    """
    cL, aL = _split(mL)
    cR, aR = _split(mR)
    if not aL or not cR:
        return [(1, tuple(sorted(mL + mR)))]
    ca = _counts(aL)
    cc = _counts(cR)
    # contraction options per annihilator type
    options = []
    for (p, a), u in ca.items():
        partner = (1 - p, a)
        v = cc.get(partner, 0)
        if v:
            options.append(((p, a), partner, u, v, 2 * p - 1))
    if not options:
        return [(1, tuple(sorted(mL + mR)))]
    results = [(1, ca, cc)]
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
    out = []
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


def op_product(A, B, max_ann=None):
    """Normal-ordered product of two mode operators (dicts), optionally windowed."""
    out = {}
    for (hL, mL), cL in A.items():
        for (hR, mR), cR in B.items():
            c = cL * cR
            h = hL + hR
            for f, modes in wick_term(mL, mR):
                if max_ann is not None and ann_degree(modes) > max_ann:
                    continue
                key = (h, modes)
                v = out.get(key)
                v = c * f if v is None else v + c * f
                if v:
                    out[key] = v
                else:
                    del out[key]
    return out


def op_commutator(A, B, max_ann=None):
    """``[A, B]`` keeping only contraction terms (uncontracted parts cancel)."""
    out = {}
    for (hL, mL), cL in A.items():
        for (hR, mR), cR in B.items():
            c = cL * cR
            h = hL + hR
            for sign, x, y in ((1, mL, mR), (-1, mR, mL)):
                for f, modes in wick_term(x, y):
                    if f == 1 and len(modes) == len(mL) + len(mR):
                        continue  # uncontracted term cancels between AB and BA
                    if max_ann is not None and ann_degree(modes) > max_ann:
                        continue
                    key = (h, modes)
                    v = out.get(key)
                    v = sign * c * f if v is None else v + sign * c * f
                    if v:
                        out[key] = v
                    else:
                        del out[key]
    return out
