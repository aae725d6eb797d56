"""Collection and full multiplication tables for pc-presented p-groups.

Elements of a group of order p^n are exponent vectors (e1..en) with
0 <= ei < p, stored as dense indices e1*p^(n-1) + ... + en.  The identity
is index 0.  Words are brought to normal form by collection from the left:
the leftmost violation of normal form is rewritten using the power relation
g^p = w or the exchange g_j^a * g_i = g_i * (g_j^{g_i})^a for i < j.  The
full table is then materialized column by column from the generator
right-multiplication maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .presentation import MAX_ORDER, MAX_RANK, PcPresentation, Word

COLLECT_BUDGET = 10**6
ASSOC_EXHAUSTIVE_LIMIT = 1024
ASSOC_SAMPLES = 10**6


class CollectionError(RuntimeError):
    """Collection exceeded its rewrite budget (mis-specified presentation?)."""


class EnumerationError(RuntimeError):
    """The group is too large to materialize."""


def collect(
    pres: PcPresentation, word: Word, budget: int = COLLECT_BUDGET
) -> tuple[int, ...]:
    """Normal form of ``word`` as an exponent vector.

    Exponents in the input may be any nonnegative integers; the power
    relations reduce them below p.
    """
    p = pres.p
    syl = [[g, e] for g, e in word.syllables if e]
    steps = 0
    i = 0
    while i < len(syl):
        steps += 1
        if steps > budget:
            raise CollectionError(
                f"collection exceeded {budget} rewrites for {pres.name}"
            )
        g, e = syl[i]
        if e >= p:
            # g^e = g^(e-p) * (g^p); the power word commutes with nothing
            # earlier, so it is inserted right after
            syl[i][1] = e - p
            syl[i + 1 : i + 1] = [[a, b] for a, b in pres.power[g].syllables]
            if syl[i][1] == 0:
                del syl[i]
            i = max(i - 1, 0)
            continue
        if i + 1 == len(syl):
            break
        g2, e2 = syl[i + 1]
        if g2 > g:
            i += 1
            continue
        if g2 == g:
            syl[i][1] = e + e2
            del syl[i + 1]
            i = max(i - 1, 0)
            continue
        # g2 < g: move one g2 over g^e using g^{g2} (an automorphism of the
        # tail group, so (g^e)^{g2} = (g^{g2})^e)
        w = pres.conjugate_word(g2, g).syllables
        rep: list[list[int]] = [[g2, 1]]
        for _ in range(e):
            rep.extend([a, b] for a, b in w)
        if e2 > 1:
            rep.append([g2, e2 - 1])
        syl[i : i + 2] = rep
        i = max(i - 1, 0)
    vec = [0] * pres.n
    for g, e in syl:
        vec[g] = e
    return tuple(vec)


@dataclass(eq=False)
class Group:
    """A fully materialized group of order p^n.

    ``mult[x, y]`` is the dense index of x*y, ``inv[x]`` the inverse,
    ``order_of[x]`` the element order, ``digits[x]`` the exponent vector.
    ``gens[i]`` is the dense index of the pc generator g_{i+1}.  Structural
    results (center, derived subgroup, ...) are cached in ``_cache`` by the
    structure module.
    """

    pres: PcPresentation
    p: int
    n: int
    size: int
    mult: np.ndarray
    inv: np.ndarray
    order_of: np.ndarray
    digits: np.ndarray
    gens: tuple[int, ...]
    _cache: dict = field(default_factory=dict, repr=False)
    _pows: dict = field(default_factory=dict, repr=False)

    @property
    def name(self) -> str:
        return self.pres.name

    @property
    def identity(self) -> int:
        return 0

    def multiply(self, x: int, y: int) -> int:
        return int(self.mult[x, y])

    def inverse(self, x: int) -> int:
        return int(self.inv[x])

    def element_order(self, x: int) -> int:
        return int(self.order_of[x])

    def vector(self, x: int) -> tuple[int, ...]:
        return tuple(int(e) for e in self.digits[x])

    def index_of(self, vec) -> int:
        idx = 0
        for e in vec:
            idx = idx * self.p + int(e)
        return idx

    def word_of(self, x: int) -> Word:
        return Word.from_vector(self.vector(x))

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = int(self.inv[x]), -k
        y = 0
        for _ in range(k % (self.size * self.p)):  # orders divide p^n
            y = int(self.mult[y, x])
        return y

    def pow_table(self, k: int) -> np.ndarray:
        """Array of x^k over all x (k >= 0), cached."""
        if k not in self._pows:
            if k == 0:
                t = np.zeros(self.size, dtype=np.uint16)
            else:
                prev = self.pow_table(k - 1)
                t = self.mult[prev, np.arange(self.size)]
            self._pows[k] = t
        return self._pows[k]

    def conjugate(self, x: int, a: int) -> int:
        """x^a = a^-1 * x * a."""
        return int(self.mult[self.mult[self.inv[a], x], a])

    def commutator(self, x: int, y: int) -> int:
        """[x, y] = x^-1 * y^-1 * x * y."""
        return int(
            self.mult[self.mult[self.inv[x], self.inv[y]], self.mult[x, y]]
        )

    def eval_word(self, word: Word) -> int:
        y = 0
        for g, e in word.syllables:
            t = self.power(self.gens[g], e)
            y = int(self.mult[y, t])
        return y

    def order_histogram(self) -> dict[int, int]:
        vals, counts = np.unique(self.order_of, return_counts=True)
        return {int(v): int(c) for v, c in zip(vals, counts)}


def enumerate_group(pres: PcPresentation) -> Group:
    """Materialize the group: all p^n normal forms and the full table."""
    p, n = pres.p, pres.n
    size = p**n
    if n > MAX_RANK or size > MAX_ORDER:
        raise EnumerationError(f"order {p}^{n} exceeds the {MAX_ORDER} cap")

    grids = np.unravel_index(np.arange(size), (p,) * n)
    digits = np.stack(grids, axis=1).astype(np.uint8)
    place = [p ** (n - 1 - i) for i in range(n)]
    gens = tuple(place)

    # right multiplication by each generator, one collection per element
    genmaps = np.empty((n, size), dtype=np.uint16)
    for k in range(n):
        for x in range(size):
            syll = [(i, int(e)) for i, e in enumerate(digits[x]) if e]
            syll.append((k, 1))
            vec = collect(pres, Word(tuple(syll)))
            idx = 0
            for e in vec:
                idx = idx * p + e
            genmaps[k, x] = idx

    # every column follows from a shorter one: x*y = (x*g_j)*y' where y
    # starts with g_j and y' = y with that digit decremented
    mult = np.empty((size, size), dtype=np.uint16)
    mult[:, 0] = np.arange(size, dtype=np.uint16)
    lead = np.argmax(digits != 0, axis=1)
    for y in range(1, size):
        j = int(lead[y])
        y2 = y - place[j]
        mult[:, y] = mult[genmaps[j], y2]

    inv = np.full(size, -1, dtype=np.int32)
    rows, cols = np.nonzero(mult == 0)
    inv[rows] = cols

    order_of = np.zeros(size, dtype=np.int32)
    cur = np.arange(size, dtype=np.uint16)
    k = 1
    while (order_of == 0).any() and k <= size:
        newly = (cur == 0) & (order_of == 0)
        order_of[newly] = k
        cur = mult[cur, np.arange(size)]
        k += 1
    # elements never reaching the identity (broken tables only) keep order 0

    return Group(
        pres=pres,
        p=p,
        n=n,
        size=size,
        mult=mult,
        inv=inv.astype(np.int64),
        order_of=order_of,
        digits=digits,
        gens=gens,
    )


@dataclass
class ConsistencyReport:
    """Outcome of the table sanity checks, with witnesses for failures.

    ``associativity_mode`` is "exhaustive" below the triple limit, else
    "sampled".  ``consistent`` is True only if every check passed.
    """

    name: str
    size: int
    identity_ok: bool
    inverses_ok: bool
    latin_ok: bool
    latin_witness: tuple | None
    relations_ok: bool
    relation_failures: list[str]
    associativity_ok: bool
    associativity_mode: str
    associativity_witness: tuple | None
    collection_ok: bool
    collection_witness: tuple | None
    generated_ok: bool

    @property
    def consistent(self) -> bool:
        return (
            self.identity_ok
            and self.inverses_ok
            and self.latin_ok
            and self.relations_ok
            and self.associativity_ok
            and self.collection_ok
            and self.generated_ok
        )

    def failures(self) -> list[str]:
        out = []
        if not self.identity_ok:
            out.append("identity axiom fails")
        if not self.inverses_ok:
            out.append("inverse axiom fails")
        if not self.latin_ok:
            out.append(f"table is not a Latin square, witness {self.latin_witness}")
        if not self.relations_ok:
            out.extend(self.relation_failures)
        if not self.associativity_ok:
            out.append(
                f"associativity fails ({self.associativity_mode}), "
                f"witness {self.associativity_witness}"
            )
        if not self.collection_ok:
            out.append(
                "table disagrees with direct collection, "
                f"witness {self.collection_witness}"
            )
        if not self.generated_ok:
            out.append("pc generators do not generate all normal forms")
        return out


def _closure_of_generators(G: Group) -> np.ndarray:
    mask = np.zeros(G.size, dtype=bool)
    mask[0] = True
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in G.gens:
                y = int(G.mult[x, g])
                if not mask[y]:
                    mask[y] = True
                    nxt.append(y)
        frontier = nxt
    return mask


def consistency_check(
    G: Group,
    assoc_limit: int = ASSOC_EXHAUSTIVE_LIMIT,
    samples: int = ASSOC_SAMPLES,
    seed: int = 0,
) -> ConsistencyReport:
    """Check the table against the group axioms and the defining relations.

    Associativity is exhaustive over all |G|^3 triples when |G| <= assoc_limit
    and sampled on ``samples`` seeded triples otherwise.  The table is also
    compared against direct collection of concatenated normal forms, which
    exercises the rewriting independently of the column recursion.
    """
    size = G.size
    idx = np.arange(size)

    identity_ok = bool(
        np.array_equal(G.mult[0], idx) and np.array_equal(G.mult[:, 0], idx)
    )

    latin_ok = True
    latin_witness = None
    rows_sorted = np.sort(G.mult, axis=1)
    if not np.array_equal(rows_sorted, np.broadcast_to(idx, G.mult.shape)):
        latin_ok = False
        bad = np.nonzero((rows_sorted != idx).any(axis=1))[0][0]
        row = G.mult[bad]
        vals, counts = np.unique(row, return_counts=True)
        dup = int(vals[counts > 1][0])
        ys = np.nonzero(row == dup)[0][:2]
        latin_witness = ("row", int(bad), int(ys[0]), int(ys[1]))
    else:
        cols_sorted = np.sort(G.mult, axis=0)
        if not np.array_equal(cols_sorted, np.broadcast_to(idx[:, None], G.mult.shape)):
            latin_ok = False
            bad = np.nonzero((cols_sorted != idx[:, None]).any(axis=0))[0][0]
            col = G.mult[:, bad]
            vals, counts = np.unique(col, return_counts=True)
            dup = int(vals[counts > 1][0])
            xs = np.nonzero(col == dup)[0][:2]
            latin_witness = ("column", int(bad), int(xs[0]), int(xs[1]))

    inverses_ok = bool(
        (G.inv >= 0).all()
        and np.array_equal(G.mult[idx, G.inv], np.zeros(size, dtype=G.mult.dtype))
        and np.array_equal(G.mult[G.inv, idx], np.zeros(size, dtype=G.mult.dtype))
    )

    relation_failures = []
    for i in range(G.n):
        gi = G.gens[i]
        lhs = G.power(gi, G.p)
        rhs = G.eval_word(G.pres.power[i])
        if lhs != rhs:
            relation_failures.append(
                f"pow g{i + 1}: table gives {G.vector(lhs)}, word gives {G.vector(rhs)}"
            )
    for i in range(G.n):
        for j in range(i + 1, G.n):
            lhs = G.conjugate(G.gens[j], G.gens[i])
            rhs = G.eval_word(G.pres.conjugate_word(i, j))
            if lhs != rhs:
                relation_failures.append(
                    f"conj g{j + 1} ^ g{i + 1}: table gives {G.vector(lhs)}, "
                    f"word gives {G.vector(rhs)}"
                )
    relations_ok = not relation_failures

    associativity_ok = True
    associativity_witness = None
    if size <= assoc_limit:
        associativity_mode = "exhaustive"
        for z in range(size):
            lhs = np.take(G.mult[:, z], G.mult)
            rhs = np.take(G.mult, G.mult[:, z], axis=1)
            if not np.array_equal(lhs, rhs):
                x, y = np.argwhere(lhs != rhs)[0]
                associativity_ok = False
                associativity_witness = (int(x), int(y), int(z))
                break
    else:
        associativity_mode = "sampled"
        rng = np.random.default_rng(seed)
        xs = rng.integers(0, size, samples)
        ys = rng.integers(0, size, samples)
        zs = rng.integers(0, size, samples)
        lhs = G.mult[G.mult[xs, ys], zs]
        rhs = G.mult[xs, G.mult[ys, zs]]
        bad = np.nonzero(lhs != rhs)[0]
        if bad.size:
            b = bad[0]
            associativity_ok = False
            associativity_witness = (int(xs[b]), int(ys[b]), int(zs[b]))

    # independent route: multiply by collecting the concatenation of the two
    # normal forms, bypassing the table recursion
    collection_ok = True
    collection_witness = None
    if size * size <= 4096:
        pairs = [(x, y) for x in range(size) for y in range(size)]
    else:
        rng = np.random.default_rng(seed + 1)
        pairs = list(
            zip(
                rng.integers(0, size, 2000).tolist(),
                rng.integers(0, size, 2000).tolist(),
            )
        )
    for x, y in pairs:
        syll = tuple(
            [(i, int(e)) for i, e in enumerate(G.digits[x]) if e]
            + [(i, int(e)) for i, e in enumerate(G.digits[y]) if e]
        )
        direct = G.index_of(collect(G.pres, Word(syll)))
        if direct != int(G.mult[x, y]):
            collection_ok = False
            collection_witness = (int(x), int(y), direct, int(G.mult[x, y]))
            break

    generated_ok = bool(_closure_of_generators(G).all())

    return ConsistencyReport(
        name=G.name,
        size=size,
        identity_ok=identity_ok,
        inverses_ok=inverses_ok,
        latin_ok=latin_ok,
        latin_witness=latin_witness,
        relations_ok=relations_ok,
        relation_failures=relation_failures,
        associativity_ok=associativity_ok,
        associativity_mode=associativity_mode,
        associativity_witness=associativity_witness,
        collection_ok=collection_ok,
        collection_witness=collection_witness,
        generated_ok=generated_ok,
    )
