"""Solvable groups from long presentations.

A long presentation lists generators x_1..x_n with prime orders p_i along a
subnormal chain: x_i^{p_i} is a word in earlier generators, and conjugation
x_i^{-1} x_j x_i is again a word in x_1..x_{i-1}.  The group is realized
level by level; every element of G_i has the unique normal form
x_1^{a_1} ... x_i^{a_i} and is indexed by the lexicographic rank of its
exponent vector (a_1 most significant), so index 0 is the identity.

Conjugation by x_i acts on G_{i-1} as an automorphism phi_i; products are
collected with x_i^a * k = phi_i^{-a}(k) * x_i^a and the power relation
x_i^{p_i} = w_i.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .cyclo import is_prime

__all__ = [
    "LongPresentation",
    "ParseError",
    "PresentationError",
    "PcGroup",
    "ConjClass",
    "parse_presentation",
    "build_group",
    "print_presentation",
]

_KEYWORDS = {"group", "gen", "pow", "act", "->", "1"}


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 0):
        super().__init__(f"line {line}:{column}: {message}")
        self.line = line
        self.column = column


class PresentationError(ValueError):
    """The presentation is structurally valid but inconsistent as a group."""


# a word is a list of (generator index, exponent) pairs; [] is the identity
Word = list[tuple[int, int]]


@dataclass
class LongPresentation:
    name: str
    gens: list[str]
    primes: list[int]
    power_words: list[Word]          # power_words[i]: word for x_i^{p_i}
    conj_words: list[dict[int, Word]]  # conj_words[i][j]: word for x_i^-1 x_j x_i

    @property
    def ngens(self) -> int:
        return len(self.gens)

    def order(self) -> int:
        return math.prod(self.primes)


_TOKEN_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


def _parse_word(tokens: list[str], gen_index: dict[str, int], limit: int,
                lineno: int) -> Word:
    """Parse word tokens, allowing only generators with index < limit."""
    if tokens == ["1"]:
        return []
    word: Word = []
    for tok in tokens:
        m = _TOKEN_RE.match(tok)
        if not m:
            raise ParseError(f"malformed word token {tok!r}", lineno)
        name, exp = m.group(1), m.group(2)
        if name not in gen_index:
            raise ParseError(f"unknown generator {name!r}", lineno)
        idx = gen_index[name]
        if idx >= limit:
            raise ParseError(
                f"generator {name!r} may not appear here (forward reference)", lineno
            )
        k = 1 if exp is None else int(exp)
        if k < 0:
            raise ParseError(f"malformed exponent in {tok!r}", lineno)
        if k:
            word.append((idx, k))
    return word


def parse_presentation(text: str) -> LongPresentation:
    """Parse the line-oriented presentation DSL.

    Syntax::

        group <name>
        gen <g> <p> [pow <word>] [act <g_j> -> <word>]...

    ``<word>`` is whitespace-separated ``g`` or ``g^k`` tokens, or ``1``.
    Omitted ``pow`` means x^p = 1; an omitted ``act g_j`` leaves g_j fixed.
    ``#`` starts a comment.
    """
    name = None
    gens: list[str] = []
    primes: list[int] = []
    power_words: list[Word] = []
    conj_words: list[dict[int, Word]] = []
    gen_index: dict[str, int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0]
        if head == "group":
            if name is not None:
                raise ParseError("duplicate group line", lineno)
            if len(tokens) != 2:
                raise ParseError("usage: group <name>", lineno)
            name = tokens[1]
        elif head == "gen":
            if name is None:
                raise ParseError("gen before group line", lineno)
            if len(tokens) < 3:
                raise ParseError("usage: gen <name> <prime> ...", lineno)
            gname = tokens[1]
            if gname in _KEYWORDS:
                raise ParseError(f"reserved word {gname!r} as generator name", lineno)
            if gname in gen_index:
                raise ParseError(f"duplicate generator {gname!r}", lineno)
            try:
                p = int(tokens[2])
            except ValueError:
                raise ParseError(f"order {tokens[2]!r} is not an integer", lineno)
            if not is_prime(p):
                raise ParseError(f"generator order {p} is not prime", lineno)
            i = len(gens)
            # split the clause tail at 'pow' / 'act' keywords
            pow_word: Word = []
            acts: dict[int, Word] = {}
            rest = tokens[3:]
            clauses: list[list[str]] = []
            for tok in rest:
                if tok in ("pow", "act"):
                    clauses.append([tok])
                elif not clauses:
                    raise ParseError(f"unexpected token {tok!r}", lineno)
                else:
                    clauses[-1].append(tok)
            for clause in clauses:
                if clause[0] == "pow":
                    if len(clause) < 2:
                        raise ParseError("empty pow word", lineno)
                    pow_word = _parse_word(clause[1:], gen_index, i, lineno)
                else:
                    if len(clause) < 4 or clause[2] != "->":
                        raise ParseError("usage: act <gen> -> <word>", lineno)
                    target = clause[1]
                    if target not in gen_index:
                        raise ParseError(f"unknown generator {target!r}", lineno)
                    j = gen_index[target]
                    if j >= i:
                        raise ParseError("act target must be an earlier generator", lineno)
                    if j in acts:
                        raise ParseError(f"duplicate act for {target!r}", lineno)
                    acts[j] = _parse_word(clause[3:], gen_index, i, lineno)
            gens.append(gname)
            primes.append(p)
            power_words.append(pow_word)
            conj_words.append(acts)
            gen_index[gname] = i
        else:
            raise ParseError(f"unknown directive {head!r}", lineno)

    if name is None:
        raise ParseError("missing group line", 1)
    return LongPresentation(name, gens, primes, power_words, conj_words)


def print_presentation(pres: LongPresentation) -> str:
    """Render a presentation back to DSL text (round-trips through parse)."""
    lines = [f"group {pres.name}"]
    for i, g in enumerate(pres.gens):
        parts = [f"gen {g} {pres.primes[i]}"]
        if pres.power_words[i]:
            parts.append("pow " + _word_str(pres, pres.power_words[i]))
        for j in sorted(pres.conj_words[i]):
            parts.append(f"act {pres.gens[j]} -> " + _word_str(pres, pres.conj_words[i][j]))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def _word_str(pres: LongPresentation, word: Word) -> str:
    if not word:
        return "1"
    return " ".join(
        pres.gens[j] if k == 1 else f"{pres.gens[j]}^{k}" for j, k in word
    )


@dataclass
class ConjClass:
    level: int
    representative: int
    members: tuple[int, ...]  # sorted element indices

    def __len__(self):
        return len(self.members)


class PcGroup:
    """A solvable group realized from a long presentation.

    Elements of the level-i subgroup G_i are indices 0..|G_i|-1 in
    lexicographic normal-form order.  Products, inverses and conjugacy data
    are available at every level of the chain.
    """

    MAX_ORDER = 20000
    TABLE_LIMIT = 2048  # full Cayley tables only below this level size

    def __init__(self, presentation: LongPresentation, max_order: int | None = None):
        self.presentation = presentation
        self.n = presentation.ngens
        self.primes = list(presentation.primes)
        self.orders = [1]
        for p in self.primes:
            self.orders.append(self.orders[-1] * p)
        self.order = self.orders[-1]
        cap = max_order if max_order is not None else self.MAX_ORDER
        if self.order > cap:
            raise PresentationError(f"group order {self.order} exceeds cap {cap}")

        # phi[i]: permutation of G_{i-1} by g -> x_i^-1 g x_i, and inverse
        self.phi: list[list[int] | None] = [None]
        self.phi_inv: list[list[int] | None] = [None]
        # normalized power relation: index of w_i in G_{i-1}
        self.power_elt: list[int] = [0]
        self._tables: list[list[int] | None] = [None] * (self.n + 1)
        self._inv: list[list[int] | None] = [None] * (self.n + 1)
        self._classes: dict[int, list[ConjClass]] = {}
        self._class_of: dict[int, list[int]] = {}
        self._element_orders: list[int] | None = None
        self._gen_power_perms: dict[tuple[int, int], np.ndarray] = {}

        for i in range(1, self.n + 1):
            self._build_level(i)
        self.exponent = self._compute_exponent()

    # -- construction ------------------------------------------------

    def _word_to_element(self, word: Word, level: int) -> int:
        g = 0
        for j, k in word:
            if j >= level:
                raise PresentationError("word references generator beyond level")
            xj = self.generator_index(j, level)
            for _ in range(k):
                g = self.mul(g, xj, level)
        return g

    def _build_level(self, i: int) -> None:
        p = self.primes[i - 1]
        below = self.orders[i - 1]
        pres = self.presentation

        w = self._word_to_element(pres.power_words[i - 1], i - 1)
        self.power_elt.append(w)

        if i == 1:
            if w != 0:
                raise PresentationError("x_1 power word must be the identity")
            self.phi.append(list(range(1)))
            self.phi_inv.append(list(range(1)))
        else:
            # conjugation images of the earlier generators
            images = []
            for j in range(i - 1):
                word = pres.conj_words[i - 1].get(j)
                if word is None:
                    images.append(self.generator_index(j, i - 1))
                else:
                    images.append(self._word_to_element(word, i - 1))
            phi = self._extend_multiplicatively(images, i - 1)
            self._check_automorphism(phi, i - 1)
            phi_inv = [0] * below
            for g, img in enumerate(phi):
                phi_inv[img] = g
            if sorted(phi) != list(range(below)):
                raise PresentationError(f"conjugation by {pres.gens[i-1]} is not bijective")
            # consistency: x^p = w forces phi(w) = w and phi^p = inner(w)
            if phi[w] != w:
                raise PresentationError(
                    f"presentation inconsistent at {pres.gens[i-1]}: "
                    "power word not fixed by conjugation"
                )
            cur = list(range(below))
            for _ in range(p):
                cur = [phi[g] for g in cur]
            w_inv = self.inv(w, i - 1)
            for g in range(below):
                if cur[g] != self.mul(self.mul(w_inv, g, i - 1), w, i - 1):
                    raise PresentationError(
                        f"presentation inconsistent at {pres.gens[i-1]}: "
                        "phi^p differs from conjugation by the power word"
                    )
            self.phi.append(phi)
            self.phi_inv.append(phi_inv)

        if self.orders[i] <= self.TABLE_LIMIT:
            self._tables[i] = self._make_table(i)
        self._inv[i] = self._make_inverses(i)
        self._spot_check_associativity(i)

    def _extend_multiplicatively(self, gen_images: list[int], level: int) -> list[int]:
        """Extend x_j -> gen_images[j] to all of G_level by normal forms."""
        out = [0] * self.orders[level]
        for g in range(self.orders[level]):
            img = 0
            for j, a in enumerate(self.exponents(g, level)):
                gj = gen_images[j]
                for _ in range(a):
                    img = self.mul(img, gj, level)
            out[g] = img
        return out

    def _check_automorphism(self, phi: list[int], level: int) -> None:
        size = self.orders[level]
        if size <= 512:
            pairs = ((g, h) for g in range(size) for h in range(size))
        else:
            gens = [self.generator_index(j, level) for j in range(level)]
            pairs = ((g, h) for g in gens for h in range(size))
        for g, h in pairs:
            if phi[self.mul(g, h, level)] != self.mul(phi[g], phi[h], level):
                raise PresentationError("conjugation image is not an automorphism")

    def _make_table(self, level: int) -> list[int]:
        size = self.orders[level]
        table = [0] * (size * size)
        for g in range(size):
            base = g * size
            for h in range(size):
                table[base + h] = self._mul_raw(g, h, level)
        return table

    def _make_inverses(self, level: int) -> list[int]:
        size = self.orders[level]
        out = [0] * size
        p = self.primes[level - 1]
        below = self.orders[level - 1]
        inv_below = self._inv[level - 1] if level > 1 else [0]
        for g in range(size):
            h, a = divmod(g, p)
            if a == 0:
                out[g] = inv_below[h] * p
            else:
                # (h x^a)^-1 = phi^-(p-a)(w^-1 h^-1) x^(p-a)
                t = self.mul(inv_below[self.power_elt[level]], inv_below[h], level - 1)
                for _ in range(p - a):
                    t = self.phi_inv[level][t]
                out[g] = t * p + (p - a)
        return out

    def _spot_check_associativity(self, level: int, trials: int = 1000) -> None:
        size = self.orders[level]
        rng = random.Random(0xA5 + level)
        for _ in range(min(trials, size * size)):
            a, b, c = (rng.randrange(size) for _ in range(3))
            if self.mul(self.mul(a, b, level), c, level) != self.mul(
                a, self.mul(b, c, level), level
            ):
                raise PresentationError("associativity failure (inconsistent relations)")

    # -- element access ----------------------------------------------

    def level_order(self, level: int) -> int:
        return self.orders[level]

    def generator_index(self, j: int, level: int | None = None) -> int:
        """Index of x_{j+1} inside G_level (default: the full group)."""
        level = self.n if level is None else level
        if j >= level:
            raise ValueError("generator outside requested level")
        # exponent vector e_j -> rank
        idx = 1
        for k in range(j + 1, level):
            idx *= self.primes[k]
        return idx

    def exponents(self, g: int, level: int | None = None) -> tuple[int, ...]:
        level = self.n if level is None else level
        out = []
        for k in range(level - 1, -1, -1):
            g, a = divmod(g, self.primes[k])
            out.append(a)
        if g:
            raise ValueError("element index out of range")
        return tuple(reversed(out))

    def index_of_exponents(self, exps: Iterable[int], level: int | None = None) -> int:
        level = self.n if level is None else level
        exps = list(exps)
        if len(exps) != level:
            raise ValueError("wrong exponent vector length")
        idx = 0
        for k, a in enumerate(exps):
            if not 0 <= a < self.primes[k]:
                raise ValueError("exponent out of range")
            idx = idx * self.primes[k] + a
        return idx

    def element_name(self, g: int, level: int | None = None) -> str:
        exps = self.exponents(g, self.n if level is None else level)
        parts = [
            self.presentation.gens[j] if a == 1 else f"{self.presentation.gens[j]}^{a}"
            for j, a in enumerate(exps)
            if a
        ]
        return "*".join(parts) if parts else "e"

    def element_from_name(self, name: str, level: int | None = None) -> int:
        level = self.n if level is None else level
        if name.strip() in ("e", "1", ""):
            return 0
        g = 0
        index = {nm: j for j, nm in enumerate(self.presentation.gens)}
        for tok in name.replace("*", " ").split():
            m = _TOKEN_RE.match(tok)
            if not m or m.group(1) not in index:
                raise ValueError(f"bad element token {tok!r}")
            j = index[m.group(1)]
            k = 1 if m.group(2) is None else int(m.group(2))
            xj = self.generator_index(j, level)
            for _ in range(k):
                g = self.mul(g, xj, level)
        return g

    def promote(self, g: int, from_level: int, to_level: int | None = None) -> int:
        """Reindex an element of G_i as an element of G_j, i <= j."""
        to_level = self.n if to_level is None else to_level
        idx = g
        for k in range(from_level, to_level):
            idx *= self.primes[k]
        return idx

    # -- group operations --------------------------------------------

    def _mul_raw(self, g: int, h: int, level: int) -> int:
        if level == 0:
            return 0
        p = self.primes[level - 1]
        hg, a = divmod(g, p)
        hh, b = divmod(h, p)
        # g h = hg x^a hh x^b = hg phi^-a(hh) x^(a+b)
        t = hh
        for _ in range(a):
            t = self.phi_inv[level][t]
        left = self.mul(hg, t, level - 1)
        c = a + b
        if c < p:
            return left * p + c
        c -= p
        w = self.power_elt[level]
        for _ in range(c):
            w = self.phi_inv[level][w]
        return self.mul(left, w, level - 1) * p + c

    def mul(self, g: int, h: int, level: int | None = None) -> int:
        level = self.n if level is None else level
        table = self._tables[level] if level <= self.n else None
        if table is not None:
            return table[g * self.orders[level] + h]
        return self._mul_raw(g, h, level)

    def inv(self, g: int, level: int | None = None) -> int:
        level = self.n if level is None else level
        if level == 0:
            return 0
        return self._inv[level][g]

    def conj(self, g: int, h: int, level: int | None = None) -> int:
        """h^-1 g h."""
        level = self.n if level is None else level
        return self.mul(self.mul(self.inv(h, level), g, level), h, level)

    def element_order(self, g: int, level: int | None = None) -> int:
        level = self.n if level is None else level
        k, cur = 1, g
        while cur != 0:
            cur = self.mul(cur, g, level)
            k += 1
        return k

    def element_order_at(self, g: int, level: int) -> int:
        return self.element_order(g, level)

    def _compute_exponent(self) -> int:
        out = 1
        for g in range(self.order):
            out = math.lcm(out, self.element_order(g))
        return out

    def orders_vector(self) -> list[int]:
        if self._element_orders is None:
            self._element_orders = [self.element_order(g) for g in range(self.order)]
        return self._element_orders

    # -- vectorized translation ----------------------------------------

    def _gen_power_perm(self, j: int, a: int) -> np.ndarray:
        """Permutation of G_j given by left multiplication with x_j^a."""
        key = (j, a)
        perm = self._gen_power_perms.get(key)
        if perm is None:
            size = self.orders[j]
            xa = a  # x_j^a has rank a at level j (least significant digit)
            perm = np.fromiter(
                (self.mul(xa, u, j) for u in range(size)), dtype=np.int64, count=size
            )
            self._gen_power_perms[key] = perm
        return perm

    def left_translation(self, g: int, level: int | None = None,
                         targets: np.ndarray | None = None) -> np.ndarray:
        """Vector of g*h over all h (or over the given target indices)."""
        level = self.n if level is None else level
        size = self.orders[level]
        idx = np.arange(size, dtype=np.int64) if targets is None else targets.astype(np.int64)
        table = self._tables[level]
        if table is not None:
            key = (-1, level)
            t = self._gen_power_perms.get(key)
            if t is None:
                t = np.asarray(table, dtype=np.int64)
                self._gen_power_perms[key] = t
            return t[g * size + idx]
        exps = self.exponents(g, level)
        # g*h = x_1^{a_1} * ( ... * (x_L^{a_L} * h))
        for j in range(level, 0, -1):
            a = exps[j - 1]
            if a == 0:
                continue
            sfx = size // self.orders[j]
            perm = self._gen_power_perm(j, a)
            idx = perm[idx // sfx] * sfx + idx % sfx
        return idx

    # -- conjugacy ---------------------------------------------------

    def conjugacy_classes(self, level: int | None = None) -> list[ConjClass]:
        level = self.n if level is None else level
        if level in self._classes:
            return self._classes[level]
        size = self.orders[level]
        gens = [self.generator_index(j, level) for j in range(level)]
        gens += [self.inv(x, level) for x in gens]
        class_of = [-1] * size
        classes: list[ConjClass] = []
        for g in range(size):
            if class_of[g] >= 0:
                continue
            orbit = {g}
            frontier = [g]
            while frontier:
                cur = frontier.pop()
                for x in gens:
                    img = self.conj(cur, x, level)
                    if img not in orbit:
                        orbit.add(img)
                        frontier.append(img)
            members = tuple(sorted(orbit))
            cid = len(classes)
            classes.append(ConjClass(level, members[0], members))
            for m in members:
                class_of[m] = cid
        self._classes[level] = classes
        self._class_of[level] = class_of
        return classes

    def class_of(self, g: int, level: int | None = None) -> int:
        level = self.n if level is None else level
        self.conjugacy_classes(level)
        return self._class_of[level][g]

    def class_sum_support(self, g: int, level: int | None = None) -> tuple[int, ...]:
        """Sorted member indices of the conjugacy class of g in G_level."""
        level = self.n if level is None else level
        if g >= self.orders[level]:
            raise ValueError(f"element {g} not in level {level}")
        classes = self.conjugacy_classes(level)
        return classes[self.class_of(g, level)].members

    def __repr__(self):
        return (
            f"PcGroup({self.presentation.name!r}, order={self.order}, "
            f"chain={self.primes})"
        )


def build_group(pres: LongPresentation, max_order: int | None = None) -> PcGroup:
    """Realize a long presentation as leveled Cayley structure."""
    return PcGroup(pres, max_order=max_order)
