"""Structural subgroups, quotients, and abelian decompositions.

Subgroups are membership masks over a fully enumerated Group; all scans are
exhaustive (desk scale permits certainty over cleverness).  Quotients and
subgroups are re-enumerated as first-class Groups through a derived pc
presentation, so every operation applies uniformly to them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import Group, enumerate_group
from .presentation import PcPresentation, Word


class StructureError(RuntimeError):
    """Violated precondition or failed internal cross-check."""


@dataclass(eq=False)
class Subgroup:
    """A subgroup as a membership mask plus a generating set."""

    group: Group
    mask: np.ndarray
    gens: tuple[int, ...]

    @property
    def order(self) -> int:
        return int(self.mask.sum())

    def elements(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def __contains__(self, x: int) -> bool:
        return bool(self.mask[x])

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.group is other.group and bool(np.array_equal(self.mask, other.mask))

    def __le__(self, other: "Subgroup") -> bool:
        return bool((~self.mask | other.mask).all())

    def __lt__(self, other: "Subgroup") -> bool:
        return self <= other and self.order < other.order

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def is_abelian(self) -> bool:
        el = self.elements()
        sub = self.group.mult[np.ix_(el, el)]
        return bool(np.array_equal(sub, sub.T))

    def exponent(self) -> int:
        return int(self.group.order_of[self.mask].max())

    def is_elementary_abelian(self) -> bool:
        return self.is_abelian() and self.exponent() <= self.group.p

    def is_normal(self) -> bool:
        G = self.group
        el = self.elements()
        for g in G.gens:
            conj = G.mult[G.mult[G.inv[g], el], g]
            if not self.mask[conj].all():
                return False
        return True


def subgroup_generated(G: Group, gens) -> Subgroup:
    """Closure of ``gens`` under multiplication (inverses come free in a
    finite group)."""
    mask = np.zeros(G.size, dtype=bool)
    mask[0] = True
    gens = [int(g) for g in gens]
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(G.mult[x, g])
                if not mask[y]:
                    mask[y] = True
                    nxt.append(y)
        frontier = nxt
    return Subgroup(G, mask, _reduce_gens(G, gens, mask))


def _reduce_gens(G: Group, gens, mask) -> tuple[int, ...]:
    """Drop generators already in the closure of the earlier ones."""
    kept: list[int] = []
    running = np.zeros(G.size, dtype=bool)
    running[0] = True
    for g in gens:
        if not running[g]:
            kept.append(int(g))
            frontier = list(np.flatnonzero(running))
            for x in frontier:
                for h in kept:
                    y = int(G.mult[x, h])
                    if not running[y]:
                        running[y] = True
                        frontier.append(y)
    if not np.array_equal(running, np.asarray(mask)):
        raise StructureError("generator reduction changed the subgroup")
    return tuple(kept)


def subgroup_from_mask(G: Group, mask: np.ndarray) -> Subgroup:
    """Wrap a closed element set as a Subgroup, deriving generators."""
    mask = np.asarray(mask, dtype=bool)
    if not mask[0]:
        raise StructureError("subgroup mask misses the identity")
    el = np.flatnonzero(mask)
    if not mask[G.mult[np.ix_(el, el)]].all():
        raise StructureError("element set is not closed under multiplication")
    gens: list[int] = []
    running = np.zeros(G.size, dtype=bool)
    running[0] = True
    for x in el:
        if not running[x]:
            gens.append(int(x))
            frontier = list(np.flatnonzero(running))
            for y in frontier:
                for h in gens:
                    z = int(G.mult[y, h])
                    if not running[z]:
                        running[z] = True
                        frontier.append(z)
    return Subgroup(G, mask, tuple(gens))


def trivial_subgroup(G: Group) -> Subgroup:
    mask = np.zeros(G.size, dtype=bool)
    mask[0] = True
    return Subgroup(G, mask, ())


def full_subgroup(G: Group) -> Subgroup:
    return Subgroup(G, np.ones(G.size, dtype=bool), tuple(G.gens))


def intersect(A: Subgroup, B: Subgroup) -> Subgroup:
    if A.group is not B.group:
        raise StructureError("subgroups of different groups")
    return subgroup_from_mask(A.group, A.mask & B.mask)


def product_set(A: Subgroup, B: Subgroup) -> np.ndarray:
    """Membership mask of the element set A·B (not always a subgroup)."""
    G = A.group
    prods = G.mult[np.ix_(A.elements(), B.elements())]
    mask = np.zeros(G.size, dtype=bool)
    mask[prods.ravel()] = True
    return mask


def centralizer(G: Group, S: Subgroup) -> Subgroup:
    """All elements commuting with S (generator checks suffice)."""
    gens = S.gens if S.gens else tuple(int(x) for x in S.elements())
    mask = np.ones(G.size, dtype=bool)
    for s in gens:
        mask &= G.mult[:, s] == G.mult[s, :]
    return subgroup_from_mask(G, mask)


def center(G: Group) -> Subgroup:
    if "center" not in G._cache:
        mask = np.ones(G.size, dtype=bool)
        for g in G.gens:
            mask &= G.mult[:, g] == G.mult[g, :]
        G._cache["center"] = subgroup_from_mask(G, mask)
    return G._cache["center"]


def center_of_subgroup(S: Subgroup) -> Subgroup:
    """Z(S) = C_G(S) ∩ S, as a subgroup of the ambient group."""
    return intersect(centralizer(S.group, S), S)


def is_abelian_group(G: Group) -> bool:
    if "abelian" not in G._cache:
        G._cache["abelian"] = bool(np.array_equal(G.mult, G.mult.T))
    return G._cache["abelian"]


def derived_subgroup(G: Group) -> Subgroup:
    """Closure of the set of all commutators [x, y]."""
    if "derived" not in G._cache:
        comm = np.zeros(G.size, dtype=bool)
        inv = G.inv
        for y in range(G.size):
            col = G.mult[G.mult[inv, inv[y]], G.mult[:, y]]
            comm[col] = True
        G._cache["derived"] = subgroup_generated(G, np.flatnonzero(comm))
    return G._cache["derived"]


def agemo(G: Group, k: int = 1) -> Subgroup:
    """Subgroup generated by all p^k-th powers."""
    powers = G.pow_table(G.p**k)
    return subgroup_generated(G, np.unique(powers))


def omega_layer(G: Group, k: int = 1) -> Subgroup:
    """Subgroup generated by all elements of order dividing p^k."""
    els = np.flatnonzero(G.order_of <= G.p**k)
    return subgroup_generated(G, els)


def omega1(A: Subgroup) -> Subgroup:
    """Elements of order dividing p in an abelian subgroup."""
    if not A.is_abelian():
        raise StructureError("omega1 is only defined here for abelian subgroups")
    G = A.group
    mask = A.mask & (G.order_of <= G.p)
    return subgroup_from_mask(G, mask)


def _frattini_from_words(G: Group) -> Subgroup:
    """Φ(G) = G′·Gᵖ, computed from commutators and p-th powers."""
    gens = list(derived_subgroup(G).gens)
    gens.extend(int(x) for x in np.unique(G.pow_table(G.p)))
    return subgroup_generated(G, gens)


def frattini(G: Group) -> Subgroup:
    """Φ(G), computed both as G′Gᵖ and as the intersection of all maximal
    subgroups; the two must agree."""
    if "frattini" not in G._cache:
        phi_words = _frattini_from_words(G)
        inter = np.ones(G.size, dtype=bool)
        for M in maximal_subgroups(G):
            inter &= M.mask
        if not np.array_equal(inter, phi_words.mask):
            raise StructureError(
                f"Frattini mismatch in {G.name}: G'G^p has order "
                f"{phi_words.order}, maximal intersection {int(inter.sum())}"
            )
        G._cache["frattini"] = phi_words
    return G._cache["frattini"]


def maximal_subgroups(G: Group) -> list[Subgroup]:
    """All index-p subgroups: preimages of hyperplanes of G/(G′Gᵖ)."""
    if "maximals" not in G._cache:
        phi0 = _frattini_from_words(G)
        if phi0.order == G.size:
            raise StructureError("trivial group has no maximal subgroups")
        qm = quotient(G, phi0)
        Q = qm.group
        d = Q.n
        digs = Q.digits.astype(np.int64)
        out = []
        for code in range(1, G.p**d):
            f = Q.digits[code].astype(np.int64)
            first = int(np.argmax(f != 0))
            if f[first] != 1:
                continue
            in_kernel = (digs @ f) % G.p == 0
            mask = in_kernel[qm.proj]
            out.append(subgroup_from_mask(G, mask))
        expect = (G.p**d - 1) // (G.p - 1)
        if len(out) != expect:
            raise StructureError(
                f"maximal subgroup count {len(out)} != {expect} in {G.name}"
            )
        G._cache["maximals"] = out
    return G._cache["maximals"]


def second_center(G: Group) -> Subgroup:
    """Preimage of Z(G/Z(G))."""
    if "second_center" not in G._cache:
        Z = center(G)
        if Z.order == G.size:
            G._cache["second_center"] = full_subgroup(G)
        else:
            qm = quotient(G, Z)
            zq = center(qm.group)
            mask = zq.mask[qm.proj]
            G._cache["second_center"] = subgroup_from_mask(G, mask)
    return G._cache["second_center"]


# -- re-enumeration of subgroups and quotients as first-class Groups --------


def _int_log(size: int, p: int) -> int:
    n = 0
    m = size
    while m > 1:
        if m % p:
            raise StructureError(f"{size} is not a power of {p}")
        m //= p
        n += 1
    return n


def group_from_table(table: np.ndarray, p: int, name: str):
    """Derive a pc presentation for the group behind a multiplication table.

    The table must be a group table over 0..m-1 with identity 0 and m a
    power of p.  Returns (Group, to_new, to_old) where to_new maps old
    indices to dense indices of the re-enumerated group and to_old is its
    inverse.  The isomorphism is verified over all pairs.
    """
    m = len(table)
    n = _int_log(m, p)
    if n == 0:
        raise StructureError("trivial group has no pc presentation here")
    table = np.asarray(table)
    idx = np.arange(m)

    inv_old = np.empty(m, dtype=np.int64)
    rows, cols = np.nonzero(table == 0)
    inv_old[rows] = cols

    # ascending central chain: repeatedly adjoin the least element whose
    # coset is central of order p in G/H; picked last = g1
    chain_masks = []
    H = np.zeros(m, dtype=bool)
    H[0] = True
    chain_masks.append(H.copy())
    gens_rev = []
    while not H.all():
        h_el = np.flatnonzero(H)
        rep = table[:, h_el].min(axis=1)
        R1 = rep[table]
        central = (R1 == R1.T).all(axis=1)
        xp = idx.copy()
        for _ in range(p - 1):
            xp = table[xp, idx]
        ok = central & ~H & H[xp]
        if not ok.any():
            raise StructureError("no central order-p coset found; not a p-group table?")
        x = int(np.flatnonzero(ok)[0])
        gens_rev.append(x)
        new_el = h_el
        cur = x
        Hnew = H.copy()
        for _ in range(p - 1):
            Hnew[table[cur, new_el]] = True
            cur = int(table[cur, x])
        H = Hnew
        chain_masks.append(H.copy())
    gens_old = list(reversed(gens_rev))
    # tails[i] = subgroup generated by g_{i+1}..g_n (old indices)
    tails = [chain_masks[n - i] for i in range(n + 1)]

    def digits_from(y: int, level: int) -> list[int]:
        # peel y = g_i^e * t from the left so the remainder t is exact
        out = []
        for i in range(level, n):
            gi = gens_old[i]
            e = 0
            cur = y
            while not tails[i + 1][cur]:
                cur = int(table[inv_old[gi], cur])
                e += 1
                if e >= p:
                    raise StructureError("digit extraction failed")
            out.append(e)
            y = cur
        return out

    def word_from(y: int, level: int) -> Word:
        digs = digits_from(y, level)
        return Word(tuple((level + k, e) for k, e in enumerate(digs) if e))

    power = []
    for i in range(n):
        gi = gens_old[i]
        cur = gi
        for _ in range(p - 1):
            cur = int(table[cur, gi])
        power.append(word_from(cur, i + 1))
    conj = {}
    for i in range(n):
        for j in range(i + 1, n):
            t = int(table[table[inv_old[gens_old[i]], gens_old[j]], gens_old[i]])
            w = word_from(t, j)
            if w != Word(((j, 1),)):
                conj[(i, j)] = w

    pres = PcPresentation(name=name, p=p, n=n, power=tuple(power), conj=conj)
    Gnew = enumerate_group(pres)

    to_new = np.empty(m, dtype=np.int64)
    for y in range(m):
        digs = digits_from(y, 0)
        v = 0
        for e in digs:
            v = v * p + e
        to_new[y] = v
    if not np.array_equal(np.sort(to_new), idx):
        raise StructureError("re-enumeration index map is not a bijection")
    to_old = np.empty(m, dtype=np.int64)
    to_old[to_new] = idx
    # the map must be an isomorphism onto the rebuilt group
    if not np.array_equal(to_new[table], Gnew.mult[np.ix_(to_new, to_new)].astype(np.int64)):
        raise StructureError("re-enumerated group disagrees with source table")
    return Gnew, to_new, to_old


@dataclass(eq=False)
class QuotientMap:
    """G → G/N with the quotient rebuilt as a first-class Group.

    ``proj[x]`` is the dense index of xN in the quotient group; ``section``
    maps each quotient element back to a coset representative in G.
    """

    source: Group
    kernel: Subgroup
    group: Group
    proj: np.ndarray
    section: np.ndarray


def quotient(G: Group, N: Subgroup, name: str | None = None) -> QuotientMap:
    """Quotient by a normal subgroup, re-enumerated with its own table."""
    if N.group is not G:
        raise StructureError("subgroup belongs to a different group")
    if not N.is_normal():
        raise StructureError(f"subgroup of order {N.order} is not normal in {G.name}")
    if N.order == G.size:
        raise StructureError("quotient by the whole group is trivial")
    key = ("quotient", N.mask.tobytes())
    if key in G._cache:
        return G._cache[key]
    n_el = N.elements()
    rep = G.mult[:, n_el].min(axis=1)
    reps_sorted = np.unique(rep)
    cidx = np.searchsorted(reps_sorted, rep)
    qtable = cidx[G.mult[np.ix_(reps_sorted, reps_sorted)]]
    if name is None:
        name = f"{G.name}.q{G.size // N.order}"
    Q, to_new, to_old = group_from_table(qtable, G.p, name)
    qm = QuotientMap(
        source=G,
        kernel=N,
        group=Q,
        proj=to_new[cidx],
        section=reps_sorted[to_old],
    )
    G._cache[key] = qm
    return qm


@dataclass(eq=False)
class SubgroupEmbedding:
    """A subgroup re-enumerated as its own Group.

    ``to_parent`` maps the new group's elements into the ambient group;
    ``from_parent`` is the partial inverse (-1 outside the subgroup).
    """

    sub: Subgroup
    group: Group
    to_parent: np.ndarray
    from_parent: np.ndarray


def subgroup_as_group(S: Subgroup, name: str | None = None) -> SubgroupEmbedding:
    G = S.group
    key = ("as_group", S.mask.tobytes())
    if key in G._cache:
        return G._cache[key]
    el = S.elements()
    pos = np.full(G.size, -1, dtype=np.int64)
    pos[el] = np.arange(len(el))
    table = pos[G.mult[np.ix_(el, el)]]
    if (table < 0).any():
        raise StructureError("subgroup mask is not closed")
    if name is None:
        name = f"{G.name}.s{S.order}"
    H, to_new, to_old = group_from_table(table, G.p, name)
    from_parent = np.full(G.size, -1, dtype=np.int64)
    from_parent[el] = to_new
    emb = SubgroupEmbedding(
        sub=S, group=H, to_parent=el[to_old], from_parent=from_parent
    )
    G._cache[key] = emb
    return emb


# -- abelian structure -------------------------------------------------------


@dataclass(frozen=True)
class AbelianInvariants:
    """Invariants of an abelian p-group: exponents a1 >= a2 >= ... with
    G ≅ C_{p^a1} × C_{p^a2} × ..., plus a basis realizing them."""

    p: int
    exponents: tuple[int, ...]
    basis: tuple[int, ...]

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(self.p**a for a in self.exponents)

    def group_order(self) -> int:
        return self.p ** sum(self.exponents)


def _plog(m: int, p: int) -> int:
    a = 0
    while m > 1:
        m //= p
        a += 1
    return a


def abelian_invariants(A) -> AbelianInvariants:
    """Greedy basis algorithm: pick a maximal-order element, build a
    complement by greedy closure with trivial intersection, recurse."""
    if isinstance(A, Group):
        A = full_subgroup(A)
    G = A.group
    if not A.is_abelian():
        raise StructureError("abelian invariants of a non-abelian subgroup")
    exps: list[int] = []
    basis: list[int] = []
    current = A
    while current.order > 1:
        el = current.elements()
        orders = G.order_of[el]
        top = int(orders.max())
        a = int(el[np.argmax(orders == top)])
        exps.append(_plog(top, G.p))
        basis.append(a)
        cyc = subgroup_generated(G, [a])
        comp_mask = np.zeros(G.size, dtype=bool)
        comp_mask[0] = True
        comp_gens: list[int] = []
        for x in el:
            x = int(x)
            if comp_mask[x]:
                continue
            cand = subgroup_generated(G, comp_gens + [x])
            if int((cand.mask & cyc.mask).sum()) == 1:
                comp_mask = cand.mask
                comp_gens = list(cand.gens)
        if int(comp_mask.sum()) * cyc.order != current.order:
            raise StructureError("greedy complement failed in abelian basis")
        current = Subgroup(G, comp_mask, tuple(comp_gens))
    return AbelianInvariants(p=G.p, exponents=tuple(exps), basis=tuple(basis))


def all_subgroups_of_abelian(S: Subgroup) -> list[Subgroup]:
    """Every subgroup of an abelian subgroup, by closure growth."""
    if not S.is_abelian():
        raise StructureError("subgroup lattice scan is limited to abelian subgroups")
    G = S.group
    triv = trivial_subgroup(G)
    seen = {triv.mask.tobytes(): triv}
    queue = [triv]
    el = [int(x) for x in S.elements()]
    while queue:
        sub = queue.pop()
        for x in el:
            if sub.mask[x]:
                continue
            bigger = subgroup_generated(G, list(sub.gens) + [x])
            key = bigger.mask.tobytes()
            if key not in seen:
                seen[key] = bigger
                queue.append(bigger)
    return sorted(seen.values(), key=lambda s: (s.order, s.mask.tobytes()))


def abelian_direct_factor_split(G: Group):
    """Largest split G = H × K with H a nontrivial central (hence abelian)
    direct factor; None when no abelian direct factor exists.

    K is automatically normal (H central), so only H ∩ K = 1 and
    |H|·|K| = |G| need checking over lifted generator combinations.
    """
    if "factor_split" in G._cache:
        return G._cache["factor_split"]
    Z = center(G)
    derived = derived_subgroup(G)
    result = None
    for H in sorted(
        all_subgroups_of_abelian(Z), key=lambda s: (-s.order, s.mask.tobytes())
    ):
        if H.order == 1:
            continue
        if H.order == G.size:
            result = (H, trivial_subgroup(G))
            break
        # G = H x K forces G' <= K, so H must miss G'
        if int((H.mask & derived.mask).sum()) > 1:
            continue
        qm = quotient(G, H)
        lifts = [int(qm.section[g]) for g in qm.group.gens]
        h_el = [int(x) for x in H.elements()]
        target = G.size // H.order
        found = _complement_search(G, H, lifts, h_el, target, [], 0)
        if found is not None:
            result = (H, found)
            break
    G._cache["factor_split"] = result
    return result


def _complement_search(G, H, lifts, h_el, target, ks, depth):
    """Adjust each lifted generator by central elements of H until the
    closure is a complement; prune as soon as the partial closure meets H."""
    if depth == len(lifts):
        K = subgroup_generated(G, ks)
        if K.order == target and int((K.mask & H.mask).sum()) == 1:
            return K
        return None
    for h in h_el:
        k = int(G.mult[lifts[depth], h])
        part = subgroup_generated(G, ks + [k])
        if part.order > target or int((part.mask & H.mask).sum()) > 1:
            continue
        found = _complement_search(G, H, lifts, h_el, target, ks + [k], depth + 1)
        if found is not None:
            return found
    return None


# -- central product decomposition (Mueller pair) ----------------------------


@dataclass(eq=False)
class CentralProductData:
    """Decomposition G = R∘S from a pair of maximal subgroups (M, N) with
    Z(M)·N = G and Z(M)∩N = Z(G); error is set when a found pair fails the
    postcondition cross-checks."""

    M: Subgroup
    N: Subgroup
    R: Subgroup
    S: Subgroup
    all_pairs: list[tuple[int, int]]
    error: str | None = None


def central_product_decomposition(G: Group) -> CentralProductData | None:
    Z = center(G)
    maxes = maximal_subgroups(G)
    centers = [center_of_subgroup(M) for M in maxes]
    pairs = []
    for a, M in enumerate(maxes):
        ZM = centers[a]
        for b, N in enumerate(maxes):
            if a == b:
                continue
            inter = ZM.mask & N.mask
            if not np.array_equal(inter, Z.mask):
                continue
            if ZM.order * N.order != G.size * Z.order:
                continue
            pairs.append((a, b))
    if not pairs:
        return None
    a, b = pairs[0]
    M, N = maxes[a], maxes[b]
    ZM, ZN = centers[a], centers[b]

    r_mask = product_set(ZM, ZN)
    R_closed = subgroup_generated(G, list(ZM.gens) + list(ZN.gens))
    err = None
    if not np.array_equal(r_mask, R_closed.mask):
        err = "Z(M)Z(N) is not closed under multiplication"
    R = R_closed
    S = intersect(M, N)
    if err is None:
        ZR = center_of_subgroup(R)
        ZS = center_of_subgroup(S)
        rs = intersect(R, S)
        checks = [
            (np.array_equal(ZR.mask, Z.mask), "Z(R) != Z(G)"),
            (np.array_equal(ZS.mask, Z.mask), "Z(S) != Z(G)"),
            (np.array_equal(rs.mask, Z.mask), "R ∩ S != Z(G)"),
            (R.order == G.p**2 * Z.order, "|R| != p^2 |Z(G)|"),
            (not R.is_abelian(), "R is abelian"),
            (
                np.array_equal(centralizer(G, R).mask, S.mask),
                "S != C_G(R)",
            ),
        ]
        if err is None:
            for ok, msg in checks:
                if not ok:
                    err = msg
                    break
        if err is None:
            # R/Z(R) elementary abelian of order p^2: p-th powers central
            r_el = R.elements()
            if not Z.mask[G.pow_table(G.p)[r_el]].all():
                err = "R/Z(R) is not elementary abelian"
    return CentralProductData(M=M, N=N, R=R, S=S, all_pairs=pairs, error=err)
