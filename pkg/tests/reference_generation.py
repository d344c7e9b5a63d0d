"""Straight-line reference for one generation of the optimizer.

Deliberately self-contained: no imports from the package under test, every
formula written out inline. Used as the field-for-field oracle for the
engine's generation step. The draw sequence mirrors the engine's documented
order using a raw numpy Generator with the same seed.
"""

import math

import numpy as np


def reference_generation(
    xs,
    fs,
    objective,
    lower,
    upper,
    m_f,
    m_cr,
    update_pos,
    archive_x,
    archive_f,
    nfe,
    nfe_max,
    np_init,
    np_fin,
    k,
    p_j,
    archive_factor,
    seed,
):
    """Advance one generation; returns the full post-generation state."""
    gen = np.random.Generator(np.random.PCG64(seed))
    xs = np.array(xs, dtype=float)
    fs = np.array(fs, dtype=float)
    archive_x = [np.array(a, dtype=float) for a in archive_x]
    archive_f = list(archive_f)
    m_f = np.array(m_f, dtype=float)
    m_cr = np.array(m_cr, dtype=float)
    H = len(m_f)
    n, d = xs.shape

    # sort best-first (stable)
    order = np.argsort(fs, kind="stable")
    xs = xs[order]
    fs = fs[order]

    p = 0.085 * (1.0 + nfe / nfe_max)
    frac = nfe / nfe_max
    if frac < 0.2:
        fw = 0.7
    elif frac < 0.4:
        fw = 0.8
    else:
        fw = 1.2

    ranks = np.array([k * (n - 1 - i) + 1.0 for i in range(n)])
    pop_cum = np.cumsum(ranks)
    pop_cum = pop_cum / pop_cum[-1]
    both = np.concatenate([ranks, np.full(len(archive_x), ranks[-1])])
    both_cum = np.cumsum(both)
    both_cum = both_cum / both_cum[-1]

    def u_nonzero():
        u = gen.random()
        while u == 0.0:
            u = gen.random()
        return u

    def cauchy(location, scale):
        return location + scale * math.tan(math.pi * (u_nonzero() - 0.5))

    Fs = np.empty(n)
    CRs = np.empty(n)
    trials = np.empty_like(xs)
    for i in range(n):
        r = int(gen.integers(0, H))
        F = cauchy(m_f[r], 0.1)
        while F <= 0.0:
            F = cauchy(m_f[r], 0.1)
        if F > 1.0:
            F = 1.0
        if nfe < 0.6 * nfe_max and F > 0.7:
            F = 0.7
        if m_cr[r] < 0.0:
            CR = 0.0
        else:
            CR = m_cr[r] + 0.1 * gen.standard_normal()
            CR = min(1.0, max(0.0, CR))
        if nfe < 0.25 * nfe_max:
            CR = max(CR, 0.7)
        elif nfe < 0.5 * nfe_max:
            CR = max(CR, 0.6)
        Fs[i] = F
        CRs[i] = CR

        u_jump = gen.random()
        jump = p_j > 0.0 and u_jump <= p_j

        j_rand = int(gen.integers(0, d))
        mask = gen.random(d) < CR
        mask[j_rand] = True

        base = np.array(xs[i], copy=True)
        if jump:
            for j in range(d):
                if not mask[j]:
                    base[j] = cauchy(xs[i][j], 0.1)

        pool = min(n, max(2, math.ceil(p * n)))
        pb = int(gen.integers(0, pool))
        while pb == i:
            pb = int(gen.integers(0, pool))
        pr1 = int(np.searchsorted(pop_cum, gen.random(), side="right"))
        while pr1 == i:
            pr1 = int(np.searchsorted(pop_cum, gen.random(), side="right"))
        pr2 = int(np.searchsorted(both_cum, gen.random(), side="right"))
        while pr2 == i or pr2 == pr1:
            pr2 = int(np.searchsorted(both_cum, gen.random(), side="right"))
        x_pr2 = xs[pr2] if pr2 < n else archive_x[pr2 - n]

        mutant = xs[i] + fw * F * (xs[pb] - xs[i]) + F * (xs[pr1] - x_pr2)
        trial = np.where(mask, mutant, base)
        for j in range(d):
            if trial[j] < lower[j]:
                trial[j] = (lower[j] + xs[i][j]) / 2.0
            elif trial[j] > upper[j]:
                trial[j] = (upper[j] + xs[i][j]) / 2.0
        trials[i] = trial

    s_f, s_cr, deltas = [], [], []
    for i in range(n):
        fu = objective(trials[i])
        nfe += 1
        if fu <= fs[i]:
            if fu < fs[i]:
                s_f.append(Fs[i])
                s_cr.append(CRs[i])
                deltas.append(fs[i] - fu)
            archive_x.append(np.array(xs[i], copy=True))
            archive_f.append(fs[i])
            xs[i] = trials[i]
            fs[i] = fu

    next_size = int(round(np_init - (nfe / nfe_max) * (np_init - np_fin)))
    next_size = max(np_fin, min(np_init, next_size))
    if next_size < n:
        order = np.argsort(fs, kind="stable")
        xs = xs[order][:next_size]
        fs = fs[order][:next_size]
        Fs = Fs[order][:next_size]
        CRs = CRs[order][:next_size]

    capacity = int(round(archive_factor * next_size))
    while len(archive_x) > capacity:
        drop = int(gen.integers(0, len(archive_x)))
        archive_x.pop(drop)
        archive_f.pop(drop)

    if s_f:
        w = np.array(deltas) / sum(deltas)
        v = np.array(s_f)
        m_f[update_pos] = float(np.sum(w * v * v) / np.sum(w * v))
        if max(s_cr) == 0.0:
            m_cr[update_pos] = -1.0
        else:
            v = np.array(s_cr)
            m_cr[update_pos] = float(np.sum(w * v * v) / np.sum(w * v))
        update_pos = (update_pos + 1) % (H - 1)

    return {
        "xs": xs,
        "fs": fs,
        "Fs": Fs,
        "CRs": CRs,
        "archive_x": archive_x,
        "archive_f": archive_f,
        "m_f": m_f,
        "m_cr": m_cr,
        "update_pos": update_pos,
        "nfe": nfe,
        "s_f": s_f,
        "s_cr": s_cr,
        "deltas": deltas,
    }
