"""Power-commutator presentations and their textual format.

A refined power-commutator presentation on generators g1..gn over a prime p
consists of a power relation g_i^p = w_i with w_i a word over g_{i+1}..g_n,
and a conjugation relation g_j^{g_i} = w_ij (i < j) with w_ij a word over
g_j..g_n.  Omitted relations default to g_i^p = 1 and g_j^{g_i} = g_j.

Text format, line oriented::

    group D8
    prime 2
    rank 3
    pow g2 = g3
    conj g2 ^ g1 = g2*g3

A word is "1" or terms joined by "*", each term g<k> or g<k>^<e> with
0 <= e < p.  '#' starts a comment.  A file may hold several groups
separated by blank lines.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

MAX_RANK = 12
MAX_ORDER = 4096


class PresentationError(ValueError):
    """Raised for syntactic or semantic problems in a presentation.

    ``line`` is the 1-based source line when the error came from parsing,
    None when the presentation was built programmatically.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Word:
    """A word over pc generators: a sequence of (generator, exponent) syllables.

    Generators are 0-based.  The empty word is the identity.  Syllables are
    kept in the order given; reordering changes the group element unless the
    generators involved commute.
    """

    syllables: tuple[tuple[int, int], ...] = ()

    @property
    def is_identity(self) -> bool:
        return not self.syllables

    def generators(self) -> set[int]:
        return {g for g, _ in self.syllables}

    def min_generator(self) -> int | None:
        return min(self.generators(), default=None)

    def format(self) -> str:
        if not self.syllables:
            return "1"
        parts = []
        for g, e in self.syllables:
            parts.append(f"g{g + 1}" if e == 1 else f"g{g + 1}^{e}")
        return "*".join(parts)

    @staticmethod
    def from_vector(vec: tuple[int, ...] | list[int]) -> "Word":
        """Normal-form word for an exponent vector (one syllable per nonzero entry)."""
        return Word(tuple((i, e) for i, e in enumerate(vec) if e))


def _check_word(word: Word, p: int, n: int, min_gen: int, what: str) -> None:
    for g, e in word.syllables:
        if not 0 <= g < n:
            raise PresentationError(f"{what}: generator g{g + 1} out of range 1..{n}")
        if g < min_gen:
            raise PresentationError(
                f"{what}: generator g{g + 1} not allowed, only g{min_gen + 1}..g{n} may appear"
            )
        if not 0 <= e < p:
            raise PresentationError(f"{what}: exponent {e} outside 0..{p - 1}")


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    d = 2
    while d * d <= m:
        if m % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PcPresentation:
    """A validated refined power-commutator presentation.

    ``power[i]`` is the word for g_{i+1}..g_n equal to g_i^p; ``conj`` maps a
    pair (i, j) with i < j to the word over g_j..g_n equal to g_j^{g_i}.
    Default relations (g_i^p = 1, g_j^{g_i} = g_j) are not stored.
    """

    name: str
    p: int
    n: int
    power: tuple[Word, ...] = ()
    conj: dict[tuple[int, int], Word] = field(default_factory=dict)

    def __post_init__(self):
        if not re.fullmatch(r"[A-Za-z0-9_.+\-]+", self.name or ""):
            raise PresentationError(f"bad group name {self.name!r}")
        if not _is_prime(self.p):
            raise PresentationError(f"prime {self.p} is not prime")
        if not 1 <= self.n <= MAX_RANK:
            raise PresentationError(f"rank {self.n} outside 1..{MAX_RANK}")
        if self.p**self.n > MAX_ORDER:
            raise PresentationError(
                f"order {self.p}^{self.n} exceeds the {MAX_ORDER} element cap"
            )
        if len(self.power) != self.n:
            raise PresentationError(
                f"expected {self.n} power words, got {len(self.power)}"
            )
        for i, w in enumerate(self.power):
            _check_word(w, self.p, self.n, i + 1, f"pow g{i + 1}")
        for (i, j), w in self.conj.items():
            if not 0 <= i < j < self.n:
                raise PresentationError(
                    f"conj pair g{j + 1} ^ g{i + 1}: need 1 <= i < j <= {self.n}"
                )
            _check_word(w, self.p, self.n, j, f"conj g{j + 1} ^ g{i + 1}")

    def conjugate_word(self, i: int, j: int) -> Word:
        """The word for g_j^{g_i} (i < j), defaulting to g_j itself."""
        return self.conj.get((i, j), Word(((j, 1),)))

    def order(self) -> int:
        return self.p**self.n

    def __eq__(self, other):
        if not isinstance(other, PcPresentation):
            return NotImplemented
        return (
            self.name == other.name
            and self.p == other.p
            and self.n == other.n
            and self.power == other.power
            and self.conj == other.conj
        )


_TERM_RE = re.compile(r"g(\d+)(?:\^(\d+))?$")


def _parse_word(text: str, p: int, n: int, line: int) -> Word:
    text = text.strip()
    if not text:
        raise PresentationError("empty word", line)
    if text == "1":
        return Word()
    syllables = []
    for raw in text.split("*"):
        term = raw.strip()
        m = _TERM_RE.fullmatch(term)
        if not m:
            raise PresentationError(f"bad term {term!r} in word {text!r}", line)
        g = int(m.group(1))
        e = int(m.group(2)) if m.group(2) is not None else 1
        if not 1 <= g <= n:
            raise PresentationError(f"generator g{g} out of range 1..{n}", line)
        if not 0 <= e < p:
            raise PresentationError(
                f"exponent {e} outside 0..{p - 1} in term {term!r}", line
            )
        if e:
            syllables.append((g - 1, e))
    return Word(tuple(syllables))


_GEN_RE = re.compile(r"g(\d+)$")


def _parse_gen(tok: str, n: int, line: int) -> int:
    m = _GEN_RE.fullmatch(tok.strip())
    if not m:
        raise PresentationError(f"expected a generator g<i>, got {tok!r}", line)
    g = int(m.group(1))
    if not 1 <= g <= n:
        raise PresentationError(f"generator g{g} out of range 1..{n}", line)
    return g - 1


def _strip_comment(line: str) -> str:
    pos = line.find("#")
    return line if pos < 0 else line[:pos]


def _parse_block(lines: list[tuple[int, str]]) -> PcPresentation:
    name = None
    p = None
    n = None
    pow_words: dict[int, tuple[Word, int]] = {}
    conj_words: dict[tuple[int, int], Word] = {}
    header_done = False

    for lineno, text in lines:
        fields = text.split(None, 1)
        key = fields[0]
        rest = fields[1] if len(fields) > 1 else ""
        if key in ("group", "prime", "rank"):
            if header_done:
                raise PresentationError(
                    f"header line {key!r} after relation lines", lineno
                )
            if key == "group":
                if name is not None:
                    raise PresentationError("duplicate group line", lineno)
                name = rest.strip()
                if not name:
                    raise PresentationError("group line needs a name", lineno)
            elif key == "prime":
                if p is not None:
                    raise PresentationError("duplicate prime line", lineno)
                try:
                    p = int(rest)
                except ValueError:
                    raise PresentationError(f"bad prime {rest!r}", lineno) from None
                if not _is_prime(p):
                    raise PresentationError(f"prime {p} is not prime", lineno)
            else:
                if n is not None:
                    raise PresentationError("duplicate rank line", lineno)
                try:
                    n = int(rest)
                except ValueError:
                    raise PresentationError(f"bad rank {rest!r}", lineno) from None
                if not 1 <= n <= MAX_RANK:
                    raise PresentationError(
                        f"rank {n} outside 1..{MAX_RANK}", lineno
                    )
        elif key in ("pow", "conj"):
            if name is None or p is None or n is None:
                raise PresentationError(
                    "group, prime, and rank must all appear before relations", lineno
                )
            header_done = True
            if "=" not in rest:
                raise PresentationError(f"{key} line needs '='", lineno)
            lhs, rhs = rest.split("=", 1)
            if key == "pow":
                i = _parse_gen(lhs, n, lineno)
                if i in pow_words:
                    raise PresentationError(f"duplicate pow g{i + 1}", lineno)
                w = _parse_word(rhs, p, n, lineno)
                pow_words[i] = (w, lineno)
            else:
                if "^" not in lhs:
                    raise PresentationError(
                        "conj line needs the form conj g<j> ^ g<i> = <word>", lineno
                    )
                jtok, itok = lhs.split("^", 1)
                j = _parse_gen(jtok, n, lineno)
                i = _parse_gen(itok, n, lineno)
                if not i < j:
                    raise PresentationError(
                        f"conj g{j + 1} ^ g{i + 1}: need i < j", lineno
                    )
                if (i, j) in conj_words:
                    raise PresentationError(
                        f"duplicate conj g{j + 1} ^ g{i + 1}", lineno
                    )
                conj_words[(i, j)] = _parse_word(rhs, p, n, lineno)
        else:
            raise PresentationError(f"unknown directive {key!r}", lineno)

    first_line = lines[0][0]
    if name is None:
        raise PresentationError("missing group line", first_line)
    if p is None:
        raise PresentationError("missing prime line", first_line)
    if n is None:
        raise PresentationError("missing rank line", first_line)

    power = []
    for i in range(n):
        if i in pow_words:
            w, lineno = pow_words[i]
            for g, _ in w.syllables:
                if g <= i:
                    raise PresentationError(
                        f"pow g{i + 1}: word may only use g{i + 2}..g{n}", lineno
                    )
            power.append(w)
        else:
            power.append(Word())
    conj = {}
    for (i, j), w in conj_words.items():
        for g, _ in w.syllables:
            if g < j:
                raise PresentationError(
                    f"conj g{j + 1} ^ g{i + 1}: word may only use g{j + 1}..g{n}"
                )
        if w != Word(((j, 1),)):
            conj[(i, j)] = w

    try:
        return PcPresentation(name=name, p=p, n=n, power=tuple(power), conj=conj)
    except PresentationError as exc:
        raise PresentationError(str(exc), first_line) from None


def _blocks(text: str):
    block: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = _strip_comment(raw).strip()
        if not stripped:
            # only genuinely blank lines separate blocks; a line holding
            # nothing but a comment stays inert
            if not raw.strip() and block:
                yield block
                block = []
            continue
        block.append((lineno, stripped))
    if block:
        yield block


def parse_corpus(text: str) -> list[PcPresentation]:
    """Parse a file with one or more blank-line separated presentations."""
    out = []
    names = set()
    for block in _blocks(text):
        pres = _parse_block(block)
        if pres.name in names:
            raise PresentationError(
                f"duplicate group name {pres.name!r}", block[0][0]
            )
        names.add(pres.name)
        out.append(pres)
    if not out:
        raise PresentationError("no presentation found in input")
    return out


def parse_presentation(text: str) -> PcPresentation:
    """Parse exactly one presentation."""
    all_pres = parse_corpus(text)
    if len(all_pres) != 1:
        raise PresentationError(
            f"expected a single presentation, found {len(all_pres)}"
        )
    return all_pres[0]


def serialize_presentation(pres: PcPresentation) -> str:
    """Canonical text for a presentation: defaults omitted, fixed line order."""
    lines = [f"group {pres.name}", f"prime {pres.p}", f"rank {pres.n}"]
    for i, w in enumerate(pres.power):
        if not w.is_identity:
            lines.append(f"pow g{i + 1} = {w.format()}")
    for i, j in sorted(pres.conj):
        lines.append(f"conj g{j + 1} ^ g{i + 1} = {pres.conj[(i, j)].format()}")
    return "\n".join(lines) + "\n"


def _shift_word(word: Word, offset: int) -> Word:
    return Word(tuple((g + offset, e) for g, e in word.syllables))


def direct_product_presentation(
    a: PcPresentation, b: PcPresentation, name: str
) -> PcPresentation:
    """Presentation of A × B: A's generators first, then B's."""
    if a.p != b.p:
        raise PresentationError("direct product needs a common prime")
    n = a.n + b.n
    power = list(a.power) + [_shift_word(w, a.n) for w in b.power]
    conj = dict(a.conj)
    for (i, j), w in b.conj.items():
        conj[(i + a.n, j + a.n)] = _shift_word(w, a.n)
    return PcPresentation(name=name, p=a.p, n=n, power=tuple(power), conj=conj)


def central_product_presentation(
    b: PcPresentation, a: PcPresentation, z_a: Word, name: str
) -> PcPresentation:
    """Presentation of the central product B ∘ A identifying B's last
    generator with the element z_a of A (a single power of one A generator).

    B's last generator must be an order-p generator that appears in no
    conjugation relation target pair (so it is visibly central in B), and
    z_a must be a single syllable gk^e whose generator has trivial power
    word, so substituted exponents stay in normal form.  The caller is
    responsible for z_a being central in A; the engine's consistency check
    confirms the result.  Layout: B's generators minus the identified one
    come first, then A's.
    """
    if a.p != b.p:
        raise PresentationError("central product needs a common prime")
    last = b.n - 1
    if not b.power[last].is_identity:
        raise PresentationError("identified generator must have order p")
    for (i, j) in b.conj:
        if j == last:
            raise PresentationError("identified generator must be central")
    if len(z_a.syllables) != 1:
        raise PresentationError("identified element must be a single power")
    zg, ze = z_a.syllables[0]
    if not a.power[zg].is_identity:
        raise PresentationError("identified element must sit on an order-p generator")
    off = b.n - 1

    def convert(word: Word) -> Word:
        out: list[tuple[int, int]] = []
        for g, e in word.syllables:
            if g == last:
                total = (ze * e) % a.p
                if total:
                    out.append((zg + off, total))
            else:
                out.append((g, e))
        return Word(tuple(out))

    n = off + a.n
    power = [convert(b.power[i]) for i in range(off)]
    power += [_shift_word(w, off) for w in a.power]
    conj: dict[tuple[int, int], Word] = {}
    for (i, j), w in b.conj.items():
        conj[(i, j)] = convert(w)
    for (i, j), w in a.conj.items():
        conj[(i + off, j + off)] = _shift_word(w, off)
    return PcPresentation(name=name, p=a.p, n=n, power=tuple(power), conj=conj)
