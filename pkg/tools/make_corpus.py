"""Generate the order-32 and order-81 ingestion corpora by cyclic extension.

Every group of order p^(k+1) has a maximal (hence normal, index p) subgroup M,
so it arises as G = <M, t> with conjugation t^-1 x t = alpha(x) for some
alpha in Aut(M), t^p = m0 in M, alpha(m0) = m0, and alpha^p equal to
conjugation by m0.  Sweeping alpha over conjugacy class representatives of
Aut(M) (pairs (alpha, m0) and (beta alpha beta^-1, beta(m0)) give isomorphic
extensions) covers all isomorphism types.  Candidates are deduplicated by
invariant fingerprint plus an explicit generator-image isomorphism search;
the final class counts are checked against the classical classification
(51 groups of order 32, 15 of order 81).

Isomorphism testing is deliberately kept out of the package; this tool owns
the only copy.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import numpy as np

from pgaut.automorphism import (
    _eval_image_word,
    _relations_by_trigger,
    automorphism_group,
)
from pgaut.engine import Group, consistency_check, enumerate_group
from pgaut.presentation import PcPresentation, Word, parse_corpus, serialize_presentation
from pgaut.structure import (
    abelian_invariants,
    center,
    derived_subgroup,
    frattini,
    maximal_subgroups,
    quotient,
    second_center,
    subgroup_as_group,
)

DATA = Path(__file__).resolve().parent.parent / "src" / "pgaut" / "data"
OUT = Path(__file__).resolve().parent.parent / "corpus"


# -- extension machinery ------------------------------------------------------


def conjugation_rows(M: Group) -> np.ndarray:
    """Row m: the permutation x -> m^-1 x m."""
    ar = np.arange(M.size)
    rows = np.empty((M.size, M.size), dtype=np.int64)
    for m in range(M.size):
        rows[m] = M.mult[M.mult[M.inv[m], ar], m]
    return rows


def _identity_row(rows: np.ndarray) -> int:
    ar = np.arange(rows.shape[1])
    hits = np.flatnonzero((rows == ar).all(axis=1))
    assert hits.size == 1
    return int(hits[0])


def _closure(rows: np.ndarray, index: dict, gens: list[int]) -> set[int]:
    seen = {_identity_row(rows)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for a in frontier:
            ra = rows[a]
            for g in gens:
                b = index[ra[rows[g]].tobytes()]
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return seen


def generating_rows(rows: np.ndarray) -> list[int]:
    """Indices of a small generating subset of the permutation group rows."""
    index = {r.tobytes(): i for i, r in enumerate(rows)}
    chosen: list[int] = []
    seen = _closure(rows, index, chosen)
    for i in range(rows.shape[0]):
        if i in seen:
            continue
        chosen.append(i)
        seen = _closure(rows, index, chosen)
        if len(seen) == rows.shape[0]:
            break
    assert len(seen) == rows.shape[0], "generating set search failed"
    return chosen


def conjugacy_class_reps(rows: np.ndarray, gens: list[int]) -> list[int]:
    """One representative per conjugacy class of the row group."""
    index = {r.tobytes(): i for i, r in enumerate(rows)}
    ginv = []
    for g in gens:
        inv = np.empty_like(rows[g])
        inv[rows[g]] = np.arange(rows.shape[1])
        ginv.append(index[inv.tobytes()])
    seen = np.zeros(rows.shape[0], dtype=bool)
    reps = []
    for i in range(rows.shape[0]):
        if seen[i]:
            continue
        reps.append(i)
        stack = [i]
        seen[i] = True
        while stack:
            a = stack.pop()
            for g, gi in zip(gens, ginv):
                b = index[rows[gi][rows[a][rows[g]]].tobytes()]
                if not seen[b]:
                    seen[b] = True
                    stack.append(b)
    return reps


def chief_chain(M: Group, alpha: np.ndarray):
    """Ascending chain 1 = T0 < ... < Tk = M, each step central of order p
    modulo the previous one in the extension <M, t>, i.e. invariant under
    both M-conjugation and alpha."""
    p, size = M.p, M.size
    mult, inv = M.mult, M.inv
    ar = np.arange(size)
    powp = M.pow_table(p)
    T = np.zeros(size, dtype=bool)
    T[0] = True
    asc_gens: list[int] = []
    asc_masks = [T.copy()]
    while not T.all():
        found = -1
        for x in range(size):
            if T[x]:
                continue
            comm = mult[mult[mult[inv[x], inv[ar]], x], ar]
            if not T[comm].all():
                continue
            if not T[mult[alpha[x], inv[x]]]:
                continue
            found = x
            break
        assert found >= 0, "no central element modulo the current term"
        x = found
        while not T[powp[x]]:
            x = int(powp[x])
        asc_gens.append(x)
        els = np.flatnonzero(T)
        newT = T.copy()
        y = x
        for _ in range(1, p):
            newT[mult[y, els]] = True
            y = int(mult[y, x])
        T = newT
        asc_masks.append(T.copy())
    assert len(asc_gens) == M.n
    return asc_gens, asc_masks


def _normal_form(M: Group, asc_gens, asc_masks, x: int) -> list[int]:
    """Exponents of x along the descending generator list."""
    p, mult, inv = M.p, M.mult, M.inv
    k = len(asc_gens)
    exps = []
    for j in range(k):
        h = asc_gens[k - 1 - j]
        tail = asc_masks[k - 1 - j]
        hinv = inv[h]
        y = x
        for e in range(p):
            if tail[y]:
                break
            y = int(mult[hinv, y])
        else:
            raise AssertionError("element escaped the chain")
        exps.append(e)
        x = y
    assert x == 0
    return exps


def extension_presentation(
    name: str, M: Group, alpha: np.ndarray, m0: int
) -> PcPresentation:
    """Refined presentation of <M, t : t^p = m0, x^t = alpha(x)>."""
    p, k = M.p, M.n
    asc_gens, asc_masks = chief_chain(M, alpha)
    hs = [asc_gens[k - 1 - j] for j in range(k)]

    def nf(x: int) -> list[int]:
        return _normal_form(M, asc_gens, asc_masks, x)

    def word_from(exps, start: int) -> Word:
        assert all(e == 0 for e in exps[:start])
        return Word(tuple((1 + i, e) for i, e in enumerate(exps) if e))

    powp = M.pow_table(p)
    power = [word_from(nf(m0), 0)]
    for j in range(k):
        power.append(word_from(nf(int(powp[hs[j]])), j + 1))
    conj: dict[tuple[int, int], Word] = {}
    for j in range(k):
        exps = nf(int(alpha[hs[j]]))
        assert exps[j] == 1, "conjugation left the chain level"
        w = word_from(exps, j)
        if w.syllables != ((1 + j, 1),):
            conj[(0, 1 + j)] = w
    for i in range(k):
        for j in range(i + 1, k):
            x = int(M.mult[M.mult[M.inv[hs[i]], hs[j]], hs[i]])
            exps = nf(x)
            assert exps[j] == 1, "conjugation left the chain level"
            w = word_from(exps, j)
            if w.syllables != ((1 + j, 1),):
                conj[(i + 1, j + 1)] = w
    return PcPresentation(name=name, p=p, n=k + 1, power=tuple(power), conj=conj)


def candidate_extensions(M: Group):
    """All (alpha, m0) pairs up to Aut(M)-equivalence of alpha."""
    ag = automorphism_group(M)
    assert ag.matrix is not None
    rows = ag.matrix.astype(np.int64)
    crows = conjugation_rows(M)
    conj_key = {}
    for m in range(M.size):
        conj_key.setdefault(crows[m].tobytes(), []).append(m)
    gens = generating_rows(rows)
    reps = conjugacy_class_reps(rows, gens)
    out = []
    for r in reps:
        alpha = rows[r]
        apow = np.arange(M.size)
        for _ in range(M.p):
            apow = alpha[apow]
        key = apow.astype(np.int64).tobytes()
        for m0 in conj_key.get(key, ()):
            if alpha[m0] == m0:
                out.append((alpha, m0))
    return out


# -- isomorphism testing (tool-local; not part of the package) ---------------


def _invariant_rows(G: Group) -> np.ndarray:
    phi = frattini(G).mask
    zc = center(G).mask
    der = derived_subgroup(G).mask
    z2 = second_center(G).mask
    size = G.size
    ar = np.arange(size)
    cls = np.empty(size, dtype=np.int64)
    for x in range(size):
        cls[x] = np.unique(G.mult[G.mult[G.inv, x], ar]).size
    return np.stack(
        [G.order_of, phi.astype(np.int64), zc.astype(np.int64),
         der.astype(np.int64), z2.astype(np.int64), cls], axis=1
    )


def fingerprint(G: Group) -> tuple:
    hist = tuple(sorted(G.order_histogram().items()))
    Z = center(G)
    der = derived_subgroup(G)
    zhist = tuple(sorted(subgroup_as_group(Z).group.order_histogram().items()))
    abq = G if der.is_trivial else quotient(G, der).group
    ab = abelian_invariants(abq).exponents
    maxes = maximal_subgroups(G)
    rows = _invariant_rows(G)
    row_hist = tuple(sorted(map(tuple, rows.tolist())))
    return (
        G.size, hist, Z.order, zhist, der.order, frattini(G).order,
        second_center(G).order, ab, len(maxes),
        sum(1 for m in maxes if m.is_abelian()), row_hist,
    )


def are_isomorphic(G: Group, H: Group) -> bool:
    """Search for generator images of G in H satisfying G's relations."""
    if G.size != H.size or G.p != H.p:
        return False
    rg = _invariant_rows(G)
    rh = _invariant_rows(H)
    hrows: dict[tuple, list[int]] = {}
    for x in range(H.size):
        hrows.setdefault(tuple(rh[x]), []).append(x)
    cand0 = []
    for k in range(G.n):
        c = hrows.get(tuple(rg[G.gens[k]]))
        if not c:
            return False
        cand0.append(np.array(c, dtype=np.int64))
    levels = _relations_by_trigger(G)
    commutes_h = np.asarray(H.mult == H.mult.T)
    pth_trivial_h = np.asarray(H.pow_table(G.p) == 0)

    fq = quotient(H, frattini(H))
    d = fq.group.n
    fg = quotient(G, frattini(G))
    if fg.group.n != d:
        return False
    fcode = fq.proj.astype(np.int64)
    fdig = fq.group.digits.astype(np.int64)
    place = G.p ** np.arange(d - 1, -1, -1, dtype=np.int64)
    qsize = fq.group.size

    imgs = [0] * G.n

    def span_push(span, v):
        if span[v]:
            return span
        new = span.copy()
        sd = fdig[np.flatnonzero(span)]
        vd = fdig[v]
        for t in range(1, G.p):
            new[((sd + t * vd) % G.p) @ place] = True
        return new

    def rec(k: int, span, rank: int) -> bool:
        if k == G.n:
            return rank == d
        C = cand0[k]
        mask = np.ones(C.size, dtype=bool)
        for rel in levels[k]:
            kind = rel[0]
            if kind == "pow-triv":
                mask &= pth_trivial_h[C]
            elif kind == "commute":
                mask &= commutes_h[imgs[rel[1]], C]
            elif kind == "pow":
                _, i, syl = rel
                lhs = H.pow_table(G.p)[imgs[i]]
                mask &= lhs == _eval_image_word(H, syl, imgs, k, C)
            else:
                _, i, j, syl = rel
                a = imgs[i]
                if j == k:
                    lhs = H.mult[H.mult[H.inv[a], C], a]
                else:
                    lhs = H.mult[H.mult[H.inv[a], imgs[j]], a]
                mask &= lhs == _eval_image_word(H, syl, imgs, k, C)
            if not mask.any():
                return False
        for y in C[mask]:
            yq = int(fcode[y])
            nspan = span_push(span, yq)
            nrank = rank + (0 if span[yq] else 1)
            if nrank + (G.n - k - 1) < d:
                continue
            imgs[k] = int(y)
            if rec(k + 1, nspan, nrank):
                return True
        return False

    span0 = np.zeros(qsize, dtype=bool)
    span0[0] = True
    return rec(0, span0, 0)


# -- generation sweep ---------------------------------------------------------


def generate(order_file: str, expected: int, out_name: str, prefix: str):
    texts = (DATA / order_file).read_text()
    classes: list[tuple[tuple, Group, PcPresentation]] = []
    for pres in parse_corpus(texts):
        M = enumerate_group(pres)
        print(f"extending {pres.name} (|Aut| = {automorphism_group(M).order})")
        for idx, (alpha, m0) in enumerate(candidate_extensions(M)):
            cand = extension_presentation(f"tmp_{pres.name}_{idx}", M, alpha, m0)
            G = enumerate_group(cand)
            rep = consistency_check(G)
            assert rep.consistent, (pres.name, idx, rep.failures())
            fp = fingerprint(G)
            hit = False
            for cfp, cG, _ in classes:
                if cfp == fp and are_isomorphic(cG, G):
                    hit = True
                    break
            if not hit:
                classes.append((fp, G, cand))
        print(f"  classes so far: {len(classes)}")
    assert len(classes) == expected, f"found {len(classes)}, expected {expected}"
    classes.sort(key=lambda t: t[0])
    blocks = []
    for i, (_, _, pres) in enumerate(classes, start=1):
        named = PcPresentation(
            name=f"{prefix}_{i:02d}", p=pres.p, n=pres.n,
            power=pres.power, conj=pres.conj,
        )
        blocks.append(serialize_presentation(named))
    OUT.mkdir(exist_ok=True)
    header = (
        f"# All {expected} groups of order {classes[0][1].size}, generated as\n"
        f"# cyclic extensions of the order-{classes[0][1].size // classes[0][1].p}"
        " corpus and deduplicated up to isomorphism.\n\n"
    )
    (OUT / out_name).write_text(header + "\n".join(blocks))
    print(f"wrote {OUT / out_name}: {len(classes)} groups")


if __name__ == "__main__":
    generate("order16.pc", 51, "order32.pc", "G32")
    generate("order27.pc", 15, "order81.pc", "G81")
