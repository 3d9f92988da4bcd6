"""Built-in group catalog.

The six named groups use the exact long presentations of the worked examples
(s3, d8, q8, sl23, a4, s4); cyclic and dihedral families are generated
programmatically: ``c<n>`` chains the prime factors of n in ascending order,
``dihedral<2n>`` extends the ``c<n>`` chain by an inverting reflection.
"""

from __future__ import annotations

import re

from .pcgroup import LongPresentation, parse_presentation

__all__ = ["catalog", "catalog_names", "CATALOG_SOURCES"]

CATALOG_SOURCES: dict[str, str] = {
    "s3": """
group s3
gen x 3
gen y 2 act x -> x^2
""",
    "d8": """
group d8
gen x 2
gen y 2 act x -> x
gen z 2 act x -> x act y -> x y
""",
    "q8": """
group q8
gen x 2
gen y 2 pow x act x -> x
gen z 2 pow x act x -> x act y -> x y
""",
    "sl23": """
group sl23
gen x 2
gen y 2 pow x act x -> x
gen z 2 pow x act x -> x act y -> x y
gen t 3 act x -> x act y -> z act z -> y z
""",
    "a4": """
group a4
gen x 2
gen y 2 act x -> x
gen z 3 act x -> y act y -> x y
""",
    "s4": """
group s4
gen x 2
gen y 2 act x -> x
gen z 3 act x -> y act y -> x y
gen t 2 act x -> x act y -> x y act z -> z^2
""",
}


def _prime_factors_ascending(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        while n % p == 0:
            out.append(p)
            n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _cyclic_source(n: int, name: str | None = None) -> str:
    primes = _prime_factors_ascending(n)
    lines = [f"group {name or f'c{n}'}"]
    for i, p in enumerate(primes):
        gen = f"x{i+1}"
        if i == 0:
            lines.append(f"gen {gen} {p}")
        else:
            lines.append(f"gen {gen} {p} pow x{i}")
    return "\n".join(lines) + "\n"


def _dihedral_source(two_n: int) -> str:
    n = two_n // 2
    primes = _prime_factors_ascending(n)
    lines = [_cyclic_source(n, name=f"dihedral{two_n}").rstrip()]
    acts = []
    m = 1
    for i, p in enumerate(primes):
        m *= p  # order of x_{i+1} in the cyclic chain
        acts.append(f"act x{i+1} -> x{i+1}^{m - 1}")
    lines.append(f"gen y 2 " + " ".join(acts))
    return "\n".join(lines) + "\n"


_FAMILY_RE = re.compile(r"^(c|dihedral)(\d+)$")


def catalog(name: str) -> LongPresentation:
    """Presentation for a catalog name; raises KeyError for unknown names."""
    key = name.lower()
    if key in CATALOG_SOURCES:
        return parse_presentation(CATALOG_SOURCES[key])
    m = _FAMILY_RE.match(key)
    if m:
        family, arg = m.group(1), int(m.group(2))
        if family == "c":
            if arg < 1:
                raise KeyError(f"bad cyclic order {arg}")
            if arg == 1:
                return parse_presentation("group c1\n")
            return parse_presentation(_cyclic_source(arg))
        if family == "dihedral":
            if arg < 6 or arg % 2:
                raise KeyError(f"dihedral groups need an even order >= 6, got {arg}")
            return parse_presentation(_dihedral_source(arg))
    raise KeyError(f"unknown catalog group {name!r}")


def catalog_names() -> list[str]:
    return sorted(CATALOG_SOURCES) + ["c<n>", "dihedral<2n>"]
