"""Search central products R o S with amalgamated centre for Case 2A groups.

The target shape: Z(R) = Z(S) elementary abelian, R/Z(R) of order p^2,
S = C_G(R) non-abelian.  The quotient (R x S)/{(z, phi(z))} is assembled
as a raw coset table, so the direct product never has to fit the engine's
order cap, and group_from_table re-derives a verified pc presentation.
"""

import sys
from collections import Counter
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))
sys.path.insert(0, str(Path(__file__).resolve().parent))

from make_corpus import candidate_extensions, extension_presentation, fingerprint
from pgaut.automorphism import automorphism_group
from pgaut.engine import consistency_check, enumerate_group
from pgaut.harness import classify
from pgaut.presentation import parse_corpus, serialize_presentation
from pgaut.structure import center, group_from_table, is_abelian_group

ROOT = Path(__file__).resolve().parent.parent


def load(path):
    return [enumerate_group(p) for p in parse_corpus(path.read_text())]


def centre_profile(G, order):
    """True if Z(G) is elementary abelian of the given order and G is not."""
    if is_abelian_group(G):
        return False
    Z = center(G)
    if Z.order != order:
        return False
    pw = G.pow_table(G.p)
    return all(pw[int(e)] == 0 for e in np.flatnonzero(Z.mask))


def _grow_span(G, span, e):
    new = set(span)
    cur = e
    for _ in range(G.p - 1):
        new |= {int(G.mult[cur, s]) for s in span}
        cur = int(G.mult[cur, e])
    return new


def basis_of(G, els):
    """Greedy basis of an elementary abelian subgroup given its elements."""
    basis, span = [], {0}
    for e in els:
        if e not in span:
            basis.append(e)
            span = _grow_span(G, span, e)
    return basis


def independent_tuples(G, els, rank):
    """Ordered bases of an elementary abelian p-group, as image tuples."""
    out = []

    def rec(chosen, span):
        if len(chosen) == rank:
            out.append(tuple(chosen))
            return
        for e in els:
            if e not in span:
                rec(chosen + [e], _grow_span(G, span, e))

    rec([], {0})
    return out


def diagonal_pairs(R, S, zr_basis, images):
    """All (z, phi(z)) pairs for the isomorphism sending zr_basis to images."""
    zmap = {0: 0}
    for zb, ib in zip(zr_basis, images):
        cur = list(zmap.items())
        az, ai = zb, ib
        for _ in range(R.p - 1):
            for z0, i0 in cur:
                zmap[int(R.mult[z0, az])] = int(S.mult[i0, ai])
            az, ai = int(R.mult[az, zb]), int(S.mult[ai, ib])
    return sorted(zmap.items())


def central_product_table(R, S, zr_basis, images, name):
    """The central product (R x S)/{(z, phi(z)^-1)} as a fresh Group."""
    pairs = diagonal_pairs(R, S, zr_basis, images)
    m = R.size * S.size
    # canonical coset code: least combined index over the diagonal orbit
    rep = np.full((R.size, S.size), m, dtype=np.int64)
    for z, w in pairs:
        cand = R.mult[:, z].astype(np.int64)[:, None] * S.size + S.mult[:, S.inv[w]]
        np.minimum(rep, cand, out=rep)
    codes = np.unique(rep)
    order = m // len(pairs)
    assert len(codes) == order and codes[0] == 0
    dense = np.full(m, -1, dtype=np.int64)
    dense[codes] = np.arange(order)
    r_i, s_i = codes // S.size, codes % S.size
    prod_r = R.mult[np.ix_(r_i, r_i)].astype(np.int64)
    prod_s = S.mult[np.ix_(s_i, s_i)].astype(np.int64)
    table = dense[rep[prod_r, prod_s]]
    assert (table >= 0).all()
    G, _, _ = group_from_table(table, R.p, name)
    return G


def sweep(rpool, spool, rank, label):
    buckets = Counter()
    hits = []
    seen = set()
    for R in rpool:
        zr = basis_of(R, [int(e) for e in np.flatnonzero(center(R).mask) if e])
        for S in spool:
            zs = [int(e) for e in np.flatnonzero(center(S).mask) if e]
            for k, images in enumerate(independent_tuples(S, zs, rank)):
                name = f"{R.pres.name}o{S.pres.name}.{k}"
                G = central_product_table(R, S, zr, images, name)
                cls = classify(G)
                key = (
                    "case2a" if cls.case2a else
                    "case2b" if cls.case2b else
                    "case1" if cls.case1 else
                    "prior" if cls.prior_literature else "other"
                )
                buckets[key] += 1
                if not cls.case2a:
                    continue
                fp = fingerprint(G)
                if fp in seen:
                    continue
                seen.add(fp)
                hits.append((R, S, k, G))
                print(f"HIT [{label}] {R.pres.name} o {S.pres.name} phi#{k}: "
                      f"|G| = {G.size}, |Z| = {center(G).order}")
    print(f"[{label}] candidate buckets: {dict(buckets)}")
    return hits


def order64_pool(o32, centre_order):
    """Distinct-fingerprint order-64 extensions with the wanted centre."""
    pool, seen = [], set()
    for M in o32:
        ag = automorphism_group(M)
        if ag.matrix is None:
            print(f"  pool: skip base {M.pres.name} (|Aut| = {ag.order})")
            continue
        for idx, (alpha, m0) in enumerate(candidate_extensions(M)):
            pres = extension_presentation(f"e{M.pres.name}_{idx}", M, alpha, m0)
            G = enumerate_group(pres)
            if not centre_profile(G, centre_order):
                continue
            fp = fingerprint(G)
            if fp in seen:
                continue
            seen.add(fp)
            pool.append(G)
    return pool


def main():
    o16 = load(ROOT / "src" / "pgaut" / "data" / "order16.pc")
    o32 = load(ROOT / "corpus" / "order32.pc")

    rpool = [G for G in o16 if centre_profile(G, 4)]
    print("order 256, |Z| = 4: R pool", [G.pres.name for G in rpool])
    spool = order64_pool(o32, 4)
    print(f"order-64 S pool: {len(spool)} fingerprint-distinct groups")
    hits = sweep(rpool, spool, 2, "256A")

    print(f"total distinct case2a hits: {len(hits)}")
    blocks = []
    for R, S, k, G in hits:
        assert consistency_check(G).consistent
        print(f"--- {R.pres.name} o {S.pres.name} phi#{k}")
        blocks.append(serialize_presentation(G.pres))
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("case2a256.pc")
    out.write_text("\n".join(blocks))
    print(f"wrote {len(blocks)} presentations to {out}")


if __name__ == "__main__":
    main()
