"""Automorphism groups by exhaustive backtracking over generator images,
restricted automorphism subgroups, and hom counting for abelian p-groups."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .engine import Group
from .presentation import Word
from .structure import (
    Subgroup,
    StructureError,
    abelian_invariants,
    center,
    derived_subgroup,
    frattini,
    is_abelian_group,
    quotient,
    subgroup_as_group,
    subgroup_generated,
    trivial_subgroup,
)

STORE_CAP = 250_000       # keep image tables only while |Aut| stays below this
NODE_BUDGET = 50_000_000  # search tree nodes before giving up
TUPLE_CAP = 1_000_000     # exhaustive tuple count refuses beyond this many tuples


class AutCapError(RuntimeError):
    """Raised when an automorphism search exceeds its node budget."""


class AutTablesUnavailable(RuntimeError):
    """Raised when an operation needs stored image tables that were dropped."""


def p_part(m: int, p: int) -> int:
    """Largest power of p dividing m."""
    if m <= 0:
        raise ValueError("p_part needs a positive integer")
    out = 1
    while m % p == 0:
        m //= p
        out *= p
    return out


@dataclass(frozen=True)
class Automorphism:
    """A bijective endomorphism stored as its full image table."""

    group: Group
    images: np.ndarray

    def __call__(self, x: int) -> int:
        return int(self.images[x])

    def compose(self, other: "Automorphism") -> "Automorphism":
        """self after other."""
        return Automorphism(self.group, self.images[other.images])

    def inverse(self) -> "Automorphism":
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(self.group.size, dtype=self.images.dtype)
        return Automorphism(self.group, inv)

    def key(self) -> bytes:
        return self.images.tobytes()

    @property
    def is_identity(self) -> bool:
        return bool((self.images == np.arange(self.group.size)).all())

    def order(self) -> int:
        out = 1
        seen = np.zeros(self.group.size, dtype=bool)
        for start in range(self.group.size):
            if seen[start]:
                continue
            length = 0
            x = start
            while not seen[x]:
                seen[x] = True
                x = int(self.images[x])
                length += 1
            out = out * length // math.gcd(out, length)
        return out


@dataclass(eq=False)
class AutGroup:
    """Result of an automorphism search.

    matrix rows are image tables in deterministic search order; it is None
    when the count exceeded the storage cap and only the order is known.
    """

    group: Group
    order: int
    matrix: np.ndarray | None
    nodes: int
    _key_index: dict[bytes, int] | None = field(default=None, repr=False)

    @property
    def stored(self) -> bool:
        return self.matrix is not None

    def aut(self, i: int) -> Automorphism:
        if self.matrix is None:
            raise AutTablesUnavailable("image tables were not stored")
        return Automorphism(self.group, self.matrix[i])

    def auts(self) -> list[Automorphism]:
        if self.matrix is None:
            raise AutTablesUnavailable("image tables were not stored")
        return [Automorphism(self.group, row) for row in self.matrix]

    def key_index(self) -> dict[bytes, int]:
        if self.matrix is None:
            raise AutTablesUnavailable("image tables were not stored")
        if self._key_index is None:
            self._key_index = {
                row.tobytes(): i for i, row in enumerate(self.matrix)
            }
        return self._key_index

    def contains_table(self, images: np.ndarray) -> bool:
        return images.astype(np.uint16).tobytes() in self.key_index()


def _conjugacy_class_sizes(G: Group) -> np.ndarray:
    """Size of each element's conjugacy class."""
    size = G.size
    ar = np.arange(size)
    out = np.empty(size, dtype=np.int64)
    inv = G.inv
    for x in range(size):
        left = G.mult[inv, x]
        cls = G.mult[left, ar]
        out[x] = np.unique(cls).size
    return out


def _element_signature(G: Group) -> np.ndarray:
    """Code per element combining order, characteristic memberships and
    conjugacy class size; automorphisms preserve each ingredient."""
    phi = frattini(G).mask
    zc = center(G).mask
    der = derived_subgroup(G).mask
    cls = _conjugacy_class_sizes(G)
    rows = np.stack(
        [G.order_of, phi.astype(np.int64), zc.astype(np.int64),
         der.astype(np.int64), cls],
        axis=1,
    )
    _, codes = np.unique(rows, axis=0, return_inverse=True)
    return codes


def _relations_by_trigger(G: Group) -> list[list[tuple]]:
    """Defining relations grouped by the highest generator index involved.

    A relation can be checked as soon as images for generators up to its
    trigger level exist.  Conjugation defaults are included so commuting
    pairs constrain the search too.  Two common shapes get dedicated tags:
    a power relation checked at its own level always has an empty word, and
    a default conjugation checked at its own level is a commutation test.
    """
    n = G.n
    levels: list[list[tuple]] = [[] for _ in range(n)]
    for i in range(n):
        w = G.pres.power[i]
        trig = max([i] + [g for g, _ in w.syllables])
        if trig == i:
            levels[trig].append(("pow-triv", i, ()))
        else:
            levels[trig].append(("pow", i, w.syllables))
    for i in range(n):
        for j in range(i + 1, n):
            w = G.pres.conjugate_word(i, j)
            trig = max([j] + [g for g, _ in w.syllables])
            if trig == j and w.syllables == ((j, 1),):
                levels[trig].append(("commute", i, j, w.syllables))
            else:
                levels[trig].append(("conj", i, j, w.syllables))
    return levels


def _commute_matrix(G: Group) -> np.ndarray:
    """Boolean matrix of commuting element pairs."""
    if "commutes" not in G._cache:
        G._cache["commutes"] = np.asarray(G.mult == G.mult.T)
    return G._cache["commutes"]


def _eval_image_word(G: Group, syllables, imgs, free: int, C: np.ndarray):
    """Evaluate a relation word on chosen images, with generator `free`
    ranging over the candidate vector C.  Returns a scalar or a vector."""
    acc = 0
    for g, e in syllables:
        if g == free:
            f = G.pow_table(e)[C]
        else:
            f = G.pow_table(e)[imgs[g]]
        acc = G.mult[acc, f]
    return acc


def automorphism_group(
    G: Group, store_cap: int = STORE_CAP, node_budget: int = NODE_BUDGET
) -> AutGroup:
    """Count all automorphisms of G; keep their image tables when few enough.

    Search assigns images to pc generators in order, pruning by element
    signature, by every defining relation as soon as its generators have
    images, and by the rank of the chosen images modulo the Frattini
    subgroup.  Every stored table is verified bijective and multiplicative
    on all pairs afterwards.
    """
    cache_key = ("aut", store_cap)
    if cache_key in G._cache and node_budget == NODE_BUDGET:
        return G._cache[cache_key]
    p, n, size = G.p, G.n, G.size

    sig = _element_signature(G)
    cand0 = [np.flatnonzero(sig == sig[G.gens[k]]).astype(np.int64) for k in range(n)]
    levels = _relations_by_trigger(G)
    commutes = _commute_matrix(G)
    pth_trivial = np.asarray(G.pow_table(p) == 0)

    fq = quotient(G, frattini(G))
    d = fq.group.n
    fcode = fq.proj.astype(np.int64)
    fdig = fq.group.digits.astype(np.int64)
    place_q = p ** np.arange(d - 1, -1, -1, dtype=np.int64)
    qsize = fq.group.size

    imgs: list[int] = [0] * n
    state = {"count": 0, "nodes": 0, "dropped": False}
    buckets: list[tuple[tuple[int, ...], np.ndarray]] = []

    def span_push(span: np.ndarray, v: int) -> np.ndarray:
        if span[v]:
            return span
        new = span.copy()
        scodes = np.flatnonzero(span)
        sd = fdig[scodes]
        vd = fdig[v]
        for k in range(1, p):
            codes = ((sd + k * vd) % p) @ place_q
            new[codes] = True
        return new

    def rec(k: int, span: np.ndarray, rank: int) -> None:
        state["nodes"] += 1
        if state["nodes"] > node_budget:
            raise AutCapError(f"node budget {node_budget} exceeded on {G.name}")
        C = cand0[k]
        mask = np.ones(C.size, dtype=bool)
        for rel in levels[k]:
            kind = rel[0]
            if kind == "pow-triv":
                mask &= pth_trivial[C]
            elif kind == "commute":
                mask &= commutes[imgs[rel[1]]][C]
            elif kind == "pow":
                _, i, syl = rel
                lhs = G.pow_table(p)[imgs[i]]
                mask &= lhs == _eval_image_word(G, syl, imgs, k, C)
            else:
                _, i, j, syl = rel
                a = imgs[i]
                if j == k:
                    lhs = G.mult[G.mult[G.inv[a], C], a]
                else:
                    lhs = G.mult[G.mult[G.inv[a], imgs[j]], a]
                mask &= lhs == _eval_image_word(G, syl, imgs, k, C)
            if not mask.any():
                return
        remaining_after = n - k - 1
        if rank + remaining_after < d:
            mask &= ~span[fcode[C]]
        survivors = C[mask]
        if survivors.size == 0:
            return
        if k == n - 1:
            state["count"] += int(survivors.size)
            if not state["dropped"]:
                if state["count"] <= store_cap:
                    buckets.append((tuple(imgs[: n - 1]), survivors.copy()))
                else:
                    state["dropped"] = True
                    buckets.clear()
            return
        for c in survivors.tolist():
            imgs[k] = c
            new_span = span_push(span, int(fcode[c]))
            new_rank = rank + (0 if new_span is span else 1)
            rec(k + 1, new_span, new_rank)
        return

    span0 = np.zeros(qsize, dtype=bool)
    span0[0] = True
    rec(0, span0, 0)
    order = state["count"]
    if order == 0:
        raise StructureError("automorphism search found nothing, not even identity")

    matrix = None
    if not state["dropped"]:
        tuples = np.empty((order, n), dtype=np.int64)
        at = 0
        for prefix, surv in buckets:
            m = surv.size
            for col, val in enumerate(prefix):
                tuples[at:at + m, col] = val
            tuples[at:at + m, n - 1] = surv
            at += m
        assert at == order
        matrix = _extend_and_verify(G, tuples)

    result = AutGroup(group=G, order=order, matrix=matrix, nodes=state["nodes"])
    if node_budget == NODE_BUDGET:
        G._cache[cache_key] = result
    return result


def _extend_and_verify(G: Group, tuples: np.ndarray) -> np.ndarray:
    """Extend generator-image tuples to full image tables and verify each is
    a bijective homomorphism on every pair of elements."""
    p, n, size = G.p, G.n, G.size
    A = tuples.shape[0]
    matrix = np.empty((A, size), dtype=np.uint16)
    place = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    lead = [(0, 0, 0)] * size
    for y in range(1, size):
        j = next(t for t in range(n) if G.digits[y][t])
        e = int(G.digits[y][j])
        lead[y] = (j, e, y - e * int(place[j]))
    chunk = max(1, min(A, (1 << 23) // max(size, 1)))
    ar = np.arange(size)
    for lo in range(0, A, chunk):
        hi = min(A, lo + chunk)
        T = tuples[lo:hi]
        rows = np.zeros((hi - lo, size), dtype=np.uint16)
        for y in range(1, size):
            j, e, y2 = lead[y]
            gen_img = G.pow_table(e)[T[:, j]]
            rows[:, y] = G.mult[gen_img, rows[:, y2]]
        if not (np.sort(rows, axis=1) == ar).all():
            raise StructureError("extension produced a non-bijective table")
        for r in range(hi - lo):
            row = rows[r]
            if not np.array_equal(row[G.mult], G.mult[np.ix_(row, row)]):
                raise StructureError("extension produced a non-multiplicative table")
        matrix[lo:hi] = rows
    return matrix


def inner_automorphisms(G: Group) -> np.ndarray:
    """Image tables of all inner automorphisms, one per coset of the centre,
    in ascending order of least coset representative."""
    if "inner" in G._cache:
        return G._cache["inner"]
    Z = center(G)
    z_els = np.flatnonzero(Z.mask)
    reps = np.unique(G.mult[:, z_els].min(axis=1))
    ar = np.arange(G.size)
    rows = np.empty((reps.size, G.size), dtype=np.uint16)
    for r, a in enumerate(reps.tolist()):
        left = G.mult[G.inv[a], ar]
        rows[r] = G.mult[left, a]
    assert rows.shape[0] == G.size // Z.order
    G._cache["inner"] = rows
    return rows


def _row_keys(matrix: np.ndarray) -> set[bytes]:
    return {row.tobytes() for row in np.ascontiguousarray(matrix, dtype=np.uint16)}


def out_order(G: Group, **kw) -> int:
    """|Aut(G)| / |Inn(G)|."""
    ag = automorphism_group(G, **kw)
    inn = G.size // center(G).order
    if ag.order % inn:
        raise StructureError("inner order fails to divide automorphism order")
    return ag.order // inn


@dataclass(eq=False)
class RestrictedAut:
    """Automorphisms acting trivially on G/M and fixing N pointwise."""

    group: Group
    modulus: Subgroup
    fixed: Subgroup
    matrix: np.ndarray
    order: int
    inner_meet_order: int

    @property
    def out_image_order(self) -> int:
        return self.order // self.inner_meet_order


def restricted_aut(G: Group, M: Subgroup, N: Subgroup) -> RestrictedAut:
    """Filter the stored automorphisms down to those with every phi(x)/x in M
    and every element of N fixed."""
    if not M.is_normal() or not N.is_normal():
        raise StructureError("restricted automorphisms need normal subgroups")
    ag = automorphism_group(G)
    if ag.matrix is None:
        raise AutTablesUnavailable(
            f"automorphism tables of {G.name} exceed the storage cap"
        )
    IM = ag.matrix
    ar = np.arange(G.size)
    diff = G.mult[IM, G.inv[ar][None, :]]
    keep = M.mask[diff].all(axis=1)
    n_els = np.flatnonzero(N.mask)
    if n_els.size:
        keep &= (IM[:, n_els] == n_els[None, :]).all(axis=1)
    members = np.ascontiguousarray(IM[keep])
    inner_keys = _row_keys(inner_automorphisms(G))
    meet = sum(1 for row in members if row.tobytes() in inner_keys)
    order = int(members.shape[0])
    if meet == 0 or order % meet:
        raise StructureError("restricted subgroup meets the inner ones badly")
    return RestrictedAut(
        group=G, modulus=M, fixed=N, matrix=members,
        order=order, inner_meet_order=meet,
    )


def count_by_generating_tuples(G: Group, cap: int = TUPLE_CAP) -> int:
    """Independent automorphism count: enumerate every n-tuple of elements,
    keep those satisfying all defining relations and generating G.

    Shares no pruning with the backtracking search; the only shortcut is
    von Dyck's theorem, by which a relation-compatible tuple induces an
    endomorphism, surjective exactly when the tuple generates.
    """
    p, n, size = G.p, G.n, G.size
    if size ** n > cap:
        raise AutCapError(f"{size}^{n} tuples exceed the cap {cap}")
    rels = []
    for i in range(n):
        rels.append(("pow", i, G.pres.power[i].syllables))
    for i in range(n):
        for j in range(i + 1, n):
            rels.append(("conj", i, j, G.pres.conjugate_word(i, j).syllables))

    def word_val(tup, syl):
        acc = 0
        for g, e in syl:
            acc = int(G.mult[acc, G.pow_table(e)[tup[g]]])
        return acc

    count = 0
    for tup in itertools.product(range(size), repeat=n):
        ok = True
        for rel in rels:
            if rel[0] == "pow":
                _, i, syl = rel
                lhs = int(G.pow_table(p)[tup[i]])
            else:
                _, i, j, syl = rel
                a = tup[i]
                lhs = int(G.mult[G.mult[G.inv[a], tup[j]], a])
            if lhs != word_val(tup, syl):
                ok = False
                break
        if not ok:
            continue
        if subgroup_generated(G, tup).order == size:
            count += 1
    return count


def hom_count_abelian(a, b) -> int:
    """|Hom(A, B)| for abelian p-groups given by invariants: product of
    p^min(a_i, b_j) over all pairs."""
    if a.p != b.p:
        raise ValueError("hom count needs a common prime")
    total = 1
    for ai in a.exponents:
        for bj in b.exponents:
            total *= a.p ** min(ai, bj)
    return total


def _power(G: Group, x: int, e: int) -> int:
    acc = 0
    while e:
        if e & 1:
            acc = int(G.mult[acc, x])
        x = int(G.mult[x, x])
        e >>= 1
    return acc


@dataclass(eq=False)
class HomFamily:
    """All homomorphisms G -> Z(G) with G' in the kernel, presented lazily
    as assignments of central images to a basis of G/G'."""

    group: Group
    count: int
    basis_orders: tuple[int, ...]
    _qm: object
    _basis_candidates: list[np.ndarray]
    _coords: np.ndarray

    def assignments(self):
        return itertools.product(*[c.tolist() for c in self._basis_candidates])

    def image_table(self, assignment: tuple[int, ...]) -> np.ndarray:
        """Value of this homomorphism on every element of G."""
        G = self.group
        vals = np.zeros(self._qm.group.size, dtype=np.int64)
        for t, z in enumerate(assignment):
            zp = np.array(
                [_power(G, z, e) for e in range(self.basis_orders[t])],
                dtype=np.int64,
            )
            vals = G.mult[vals, zp[self._coords[:, t]]]
        return vals[self._qm.proj]


def _basis_coordinates(q: Group, basis, orders) -> np.ndarray:
    """coords[y, t] = exponent of basis[t] in y, for an abelian group with
    the given independent basis."""
    r = len(basis)
    elts = np.zeros(1, dtype=np.int64)
    coords = np.zeros((1, r), dtype=np.int64)
    for t in range(r):
        o = orders[t]
        pws = np.array([_power(q, basis[t], e) for e in range(o)], dtype=np.int64)
        new_elts = q.mult[pws[:, None], elts[None, :]].ravel()
        coords = np.tile(coords, (o, 1))
        coords[:, t] = np.repeat(np.arange(o), elts.size)
        elts = new_elts
    if np.unique(elts).size != q.size:
        raise StructureError("basis fails to reach the whole abelianisation")
    out = np.zeros((q.size, r), dtype=np.int64)
    out[elts] = coords
    return out


def homs_to_center(G: Group) -> HomFamily:
    """Family of all homomorphisms from G into its centre killing G'."""
    qm = quotient(G, derived_subgroup(G))
    inv_q = abelian_invariants(qm.group)
    z_els = center(G).elements()
    cands = []
    for a in inv_q.exponents:
        bound = G.p ** a
        cands.append(z_els[G.order_of[z_els] <= bound].astype(np.int64))
    count = 1
    for c in cands:
        count *= int(c.size)
    orders = tuple(G.p ** a for a in inv_q.exponents)
    coords = _basis_coordinates(qm.group, inv_q.basis, orders)
    if count != hom_count_abelian(inv_q, center_invariants(G)):
        raise StructureError("hom family size disagrees with the pair formula")
    return HomFamily(
        group=G, count=count, basis_orders=orders, _qm=qm,
        _basis_candidates=cands, _coords=coords,
    )


def center_invariants(G: Group):
    """Abelian invariants of Z(G)."""
    return abelian_invariants(subgroup_as_group(center(G)).group)


def central_aut_from_hom(G: Group, images: np.ndarray) -> Automorphism | None:
    """x -> x * f(x) for a central hom f killing G'; None when not bijective."""
    ar = np.arange(G.size)
    table = G.mult[ar, images]
    lhs = table[G.mult]
    rhs = G.mult[np.ix_(table, table)]
    if not np.array_equal(lhs, rhs):
        raise StructureError("central map fails to be an endomorphism")
    if np.unique(table).size != G.size:
        return None
    return Automorphism(G, table.astype(np.uint16))


@dataclass(frozen=True)
class AdneyYenResult:
    group_name: str
    central_aut_order: int
    hom_count: int

    @property
    def equal(self) -> bool:
        return self.central_aut_order == self.hom_count


def adney_yen_check(G: Group) -> AdneyYenResult:
    """For a group with no abelian direct factor, the central automorphisms
    are exactly x -> x f(x) over Hom(G/G', Z); compare both counts."""
    from .structure import abelian_direct_factor_split

    if is_abelian_group(G):
        raise StructureError("central automorphism count needs a non-abelian group")
    if abelian_direct_factor_split(G) is not None:
        raise StructureError("group has an abelian direct factor")
    ra = restricted_aut(G, center(G), trivial_subgroup(G))
    inv_q = abelian_invariants(quotient(G, derived_subgroup(G)).group)
    hc = hom_count_abelian(inv_q, center_invariants(G))
    return AdneyYenResult(
        group_name=G.name, central_aut_order=ra.order, hom_count=hc
    )
