"""Hand-expanded golden data for the worked examples.

Everything here is built directly from averaging sums (1/m)(1 + sX + ... +
(sX)^(m-1)) and class sums, independently of the engine's diagram pipeline,
so the pipeline can be tested against it as an oracle.
"""

from fractions import Fraction

from solvarep.catalog import catalog
from solvarep.cyclo import Cyclotomic, CyclotomicField
from solvarep.galg import AlgebraElement, ExactMatrix
from solvarep.pcgroup import build_group

_GROUPS = {}


def group_and_field(name):
    """(PcGroup, CyclotomicField at the group exponent) for a catalog name."""
    if name not in _GROUPS:
        g = build_group(catalog(name))
        _GROUPS[name] = (g, CyclotomicField(g.exponent))
    return _GROUPS[name]


def avg(g, backend, elt_name, m, scalar=None):
    """(1/m) * sum_k (s*elt)^k for k < m."""
    s = backend.one if scalar is None else scalar
    x = g.element_from_name(elt_name)
    be = backend
    coeffs = {}
    cur_g, cur_s = 0, be.one
    for _ in range(m):
        coeffs[cur_g] = be.add(coeffs.get(cur_g, be.zero), cur_s)
        cur_g = g.mul(cur_g, x)
        cur_s = be.mul(cur_s, s)
    out = AlgebraElement(g, g.n, be, coeffs)
    return out.scale(Fraction(1, m))


def class_sum(g, backend, elt_name):
    support = g.class_sum_support(g.element_from_name(elt_name))
    return AlgebraElement.from_support(g, backend, support)


def one(g, backend):
    return AlgebraElement.one(g, backend)


def root(backend, order, power=1):
    return backend.root_of_unity(order) ** power


def pci_set_s3():
    g, f = group_and_field("s3")
    w = root(f, 3)
    e_x = avg(g, f, "x", 3)
    e_wx = avg(g, f, "x", 3, w)
    e_w2x = avg(g, f, "x", 3, w * w)
    return g, f, {
        e_x * avg(g, f, "y", 2),
        e_x * avg(g, f, "y", 2, f.from_rational(-1)),
        e_wx + e_w2x,
    }


def _pm(g, f, name, sign):
    return avg(g, f, name, 2, f.from_rational(sign))


def pci_set_d8():
    g, f = group_and_field("d8")
    ex, emx = _pm(g, f, "x", 1), _pm(g, f, "x", -1)
    ey, emy = _pm(g, f, "y", 1), _pm(g, f, "y", -1)
    ez, emz = _pm(g, f, "z", 1), _pm(g, f, "z", -1)
    return g, f, {
        ex * ey * ez,
        ex * ey * emz,
        ex * emy * ez,
        ex * emy * emz,
        emx,
    }


def pci_set_q8():
    g, f = group_and_field("q8")
    ex, emx = _pm(g, f, "x", 1), _pm(g, f, "x", -1)
    ey, emy = _pm(g, f, "y", 1), _pm(g, f, "y", -1)
    ez, emz = _pm(g, f, "z", 1), _pm(g, f, "z", -1)
    return g, f, {
        ex * ey * ez,
        ex * ey * emz,
        ex * emy * ez,
        ex * emy * emz,
        emx,
    }


def pci_set_a4():
    g, f = group_and_field("a4")
    w = root(f, 3)
    exy = _pm(g, f, "x", 1) * _pm(g, f, "y", 1)
    out = {exy * avg(g, f, "z", 3, w**k) for k in range(3)}
    out.add(one(g, f) - exy)
    return g, f, out


def pci_set_sl23():
    g, f = group_and_field("sl23")
    w = root(f, 3)
    ex, emx = _pm(g, f, "x", 1), _pm(g, f, "x", -1)
    ey, emy = _pm(g, f, "y", 1), _pm(g, f, "y", -1)
    ez, emz = _pm(g, f, "z", 1), _pm(g, f, "z", -1)
    #三 splits of e_{-x} under the class sum of t, scaled by the cube root -2
    c = (class_sum(g, f, "t") * emx).scale(Fraction(-1, 2))
    us = set()
    for k in range(3):
        zk = w**k
        us.add((emx + c.scale(zk) + (c * c).scale(zk * zk)).scale(Fraction(1, 3)))
    u4 = ex * ey * emz + ex * emy * ez + ex * emy * emz
    base = ex * ey * ez
    u567 = {base * avg(g, f, "t", 3, w**k) for k in range(3)}
    return g, f, us | {u4} | u567


def pci_set_s4():
    g, f = group_and_field("s4")
    w = root(f, 3)
    exy = _pm(g, f, "x", 1) * _pm(g, f, "y", 1)
    top = one(g, f) - exy
    c = (class_sum(g, f, "t") * top).scale(Fraction(1, 2))
    b1 = (top + c).scale(Fraction(1, 2))
    b2 = (top - c).scale(Fraction(1, 2))
    ezt = exy * avg(g, f, "z", 3)
    b3 = ezt * _pm(g, f, "t", 1)
    b4 = ezt * _pm(g, f, "t", -1)
    b5 = exy * avg(g, f, "z", 3, w) + exy * avg(g, f, "z", 3, w * w)
    return g, f, {b1, b2, b3, b4, b5}


PCI_SETS = {
    "s3": pci_set_s3,
    "d8": pci_set_d8,
    "q8": pci_set_q8,
    "a4": pci_set_a4,
    "sl23": pci_set_sl23,
    "s4": pci_set_s4,
}


def _mat(f, rows):
    def conv(v):
        if isinstance(v, Cyclotomic):
            return v.retarget(f.level)
        return f.from_rational(v)

    return ExactMatrix(f, [[conv(v) for v in row] for row in rows])


def paper_matrix_reps(name):
    """Generator-name -> matrix maps for the published model representations.

    The degree-3 matrices for the 24-element linear group fix an obvious
    misprint (the printed value breaks the z^2 = x relation); the corrected
    entry is the diagonal of conjugate values forced by the relations.
    """
    g, f = group_and_field(name)
    N = f.level
    if name == "s3":
        w = root(f, 3)
        return [{"x": _mat(f, [[w * w, 0], [0, w]]), "y": _mat(f, [[0, 1], [1, 0]])}]
    if name == "d8":
        return [{
            "x": _mat(f, [[-1, 0], [0, -1]]),
            "y": _mat(f, [[1, 0], [0, -1]]),
            "z": _mat(f, [[0, 1], [1, 0]]),
        }]
    if name == "q8":
        i = root(f, 4)
        return [{
            "x": _mat(f, [[-1, 0], [0, -1]]),
            "y": _mat(f, [[i, 0], [0, -i]]),
            "z": _mat(f, [[0, -1], [1, 0]]),
        }]
    if name == "a4":
        return [{
            "x": _mat(f, [[1, 0, 0], [0, -1, 0], [0, 0, -1]]),
            "y": _mat(f, [[-1, 0, 0], [0, -1, 0], [0, 0, 1]]),
            "z": _mat(f, [[0, 0, 1], [1, 0, 0], [0, 1, 0]]),
        }]
    if name == "sl23":
        return [{
            "x": _mat(f, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
            "y": _mat(f, [[1, 0, 0], [0, -1, 0], [0, 0, -1]]),
            "z": _mat(f, [[-1, 0, 0], [0, -1, 0], [0, 0, 1]]),
            "t": _mat(f, [[0, 0, 1], [1, 0, 0], [0, 1, 0]]),
        }]
    if name == "s4":
        w = root(f, 3)
        theta3 = {
            "x": _mat(f, [[1, 0], [0, 1]]),
            "y": _mat(f, [[1, 0], [0, 1]]),
            "z": _mat(f, [[w, 0], [0, w * w]]),
            "t": _mat(f, [[0, 1], [1, 0]]),
        }
        base3 = {
            "x": [[1, 0, 0], [0, -1, 0], [0, 0, -1]],
            "y": [[-1, 0, 0], [0, -1, 0], [0, 0, 1]],
            "z": [[0, 0, 1], [1, 0, 0], [0, 1, 0]],
        }
        theta4 = {k: _mat(f, v) for k, v in base3.items()}
        theta4["t"] = _mat(f, [[1, 0, 0], [0, 0, 1], [0, 1, 0]])
        theta5 = {k: _mat(f, v) for k, v in base3.items()}
        theta5["t"] = _mat(f, [[-1, 0, 0], [0, 0, -1], [0, -1, 0]])
        return [theta3, theta4, theta5]
    raise KeyError(name)
