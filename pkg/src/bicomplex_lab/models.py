"""Builders producing validated double complexes.

Structure-equation models are finite exterior algebras on generators
``w1..wn`` and their conjugates ``cw1..cwn``, bigraded by (number of w
factors, number of cw factors).  The differential of each ``wk`` is
prescribed; it extends to the whole algebra by the graded Leibniz rule, its
(1,0)/(0,1) bidegree parts give the two differentials, and the equations
for the conjugate generators follow by conjugation.  Such models are
desk-scale stand-ins for the invariant differential forms of compact
homogeneous complex manifolds; presets cover the complex torus, the Iwasawa
threefold, and the primary Kodaira surface.

The module also exposes a small line-based text format for structure
equations and a seeded generator of random abstract complexes assembled
from prescribed indecomposable parts.
"""

import random
import re
from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

from .bicomplex import (
    Bicomplex,
    ConjugationStructure,
    ProductStructure,
    ensure_valid,
)
from .exactla import (
    ExactScalar,
    Matrix,
    SC_MINUS_ONE,
    SC_ONE,
    SC_ZERO,
    inverse,
    scalar,
)


class StructureEquationError(ValueError):
    """Raised for malformed or non-integrable structure equations."""


@dataclass(frozen=True)
class StructureEquationSpec:
    """Complex dimension ``n`` plus the prescribed differentials.

    ``differentials`` maps a generator index k (1-based) to a tuple of
    terms ``(coefficient, generator, generator)`` describing d(wk); each
    generator is a pair ("w", i) or ("cw", i).  Missing indices mean
    d(wk) = 0.
    """

    n: int
    differentials: dict


# A monomial is a pair (I, J) of strictly increasing index tuples: the
# wedge of the w_i for i in I and the cw_j for j in J, in that order.


def _merge_sign(a, b):
    """Shuffle sign for concatenating two sorted index tuples; None if they
    overlap."""
    if set(a) & set(b):
        return None
    inversions = sum(1 for x in a for y in b if y < x)
    merged = tuple(sorted(a + b))
    return (-1) ** inversions, merged


def _wedge_monomials(m1, m2):
    """Sign and result of wedging two canonical monomials; None if zero."""
    (i1, j1), (i2, j2) = m1, m2
    mi = _merge_sign(i1, i2)
    if mi is None:
        return None
    mj = _merge_sign(j1, j2)
    if mj is None:
        return None
    sign = mi[0] * mj[0] * ((-1) ** (len(j1) * len(i2)))
    return sign, (mi[1], mj[1])


_SIGN_SCALARS = {1: SC_ONE, -1: SC_MINUS_ONE}


def _element_diff(diff_gen, element):
    """Apply a generator-level derivation to an element.

    ``diff_gen`` maps a generator to a list of (coefficient, 2-generator
    monomial) terms; ``element`` maps monomials to coefficients.  The
    derivation pulls each generator to the front of its monomial (sign
    (-1)^position) and substitutes its differential there.
    """
    out = {}
    for (idx_i, idx_j), coeff in element.items():
        gens = [("w", i) for i in idx_i] + [("cw", j) for j in idx_j]
        for t, gen in enumerate(gens):
            terms = diff_gen.get(gen)
            if not terms:
                continue
            if gen[0] == "w":
                rest = (tuple(x for x in idx_i if x != gen[1]), idx_j)
            else:
                rest = (idx_i, tuple(x for x in idx_j if x != gen[1]))
            for gcoeff, gmono in terms:
                wedged = _wedge_monomials(gmono, rest)
                if wedged is None:
                    continue
                sign, mono = wedged
                if t % 2:
                    sign = -sign
                value = out.get(mono, SC_ZERO) + coeff * gcoeff * \
                    _SIGN_SCALARS[sign]
                if value:
                    out[mono] = value
                elif mono in out:
                    del out[mono]
    return out


def _monomial_basis(n, p, q):
    return [(i, j)
            for i in combinations(range(1, n + 1), p)
            for j in combinations(range(1, n + 1), q)]


def _normalize_terms(spec):
    """Validate and canonicalize d(wk) for every k; returns per-generator
    (2,0) and (1,1) term dictionaries."""
    n = spec.n
    for k in spec.differentials:
        if not (isinstance(k, int) and 1 <= k <= n):
            raise StructureEquationError(
                f"equation for unknown generator w{k} (n = {n})")
    del_gen = {}
    delbar_gen = {}
    for k in range(1, n + 1):
        acc = {}
        for coeff, g1, g2 in spec.differentials.get(k, ()):
            coeff = scalar(coeff)
            for g in (g1, g2):
                kind, idx = g
                if kind not in ("w", "cw") or not 1 <= idx <= n:
                    raise StructureEquationError(
                        f"d(w{k}): bad generator {g!r}")
            if not coeff:
                continue
            (k1, i1), (k2, i2) = g1, g2
            if k1 == "cw" and k2 == "cw":
                raise StructureEquationError(
                    f"d(w{k}) has a conjugate-conjugate term "
                    f"cw{i1}^cw{i2}: integrability fails")
            if g1 == g2:
                continue
            if k1 == "w" and k2 == "w":
                mono, sgn = ((i1, i2), 1) if i1 < i2 else ((i2, i1), -1)
                mono = (mono, ())
            elif k1 == "w":
                mono, sgn = ((i1,), (i2,)), 1
            else:
                mono, sgn = ((i2,), (i1,)), -1
            value = acc.get(mono, SC_ZERO) + coeff * _SIGN_SCALARS[sgn]
            if value:
                acc[mono] = value
            elif mono in acc:
                del acc[mono]
        hol = [(c, m) for m, c in sorted(acc.items()) if len(m[0]) == 2]
        mix = [(c, m) for m, c in sorted(acc.items()) if len(m[0]) == 1]
        if hol:
            del_gen[("w", k)] = [(c, m) for c, m in hol]
        if mix:
            delbar_gen[("w", k)] = [(c, m) for c, m in mix]
        # Conjugated equations: d(cw_k) is the conjugate of d(w_k).  A
        # mixed term c * w_i^cw_j conjugates to -conj(c) * w_j^cw_i and a
        # holomorphic term c * w_i^w_j to conj(c) * cw_i^cw_j.
        anti_mix = [(-(c.conjugate()), ((j,), (i,)))
                    for c, ((i,), (j,)) in mix]
        anti_hol = [(c.conjugate(), ((), m[0])) for c, m in hol]
        if anti_mix:
            del_gen[("cw", k)] = anti_mix
        if anti_hol:
            delbar_gen[("cw", k)] = anti_hol
    return del_gen, delbar_gen


def from_structure_equations(spec, *, label=""):
    """Build the exterior-algebra double complex of a structure-equation
    spec.

    The output carries a conjugation structure (generator swap w_i <->
    cw_i) and, whenever the top-bidegree functional provably kills
    boundaries there (automatic for unimodular equations, e.g. all shipped
    presets), a product structure whose functional reads off the
    coefficient of the top monomial w1^..^wn^cw1^..^cwn.

    Raises StructureEquationError when integrability fails (a
    conjugate-conjugate term is present) or d does not square to zero.
    """
    n = spec.n
    del_gen, delbar_gen = _normalize_terms(spec)
    # d squared must vanish on every generator; by the derivation property
    # this forces it to vanish on the whole algebra.
    for kind in ("w", "cw"):
        for k in range(1, n + 1):
            gen = (kind, k)
            first = {}
            for table in (del_gen, delbar_gen):
                for c, m in table.get(gen, ()):
                    first[m] = first.get(m, SC_ZERO) + c
            second = {}
            for table in (del_gen, delbar_gen):
                for m, c in _element_diff(table, first).items():
                    value = second.get(m, SC_ZERO) + c
                    if value:
                        second[m] = value
                    elif m in second:
                        del second[m]
            if second:
                raise StructureEquationError(
                    f"d does not square to zero on {kind}{k}")
    monos = {}
    index_of = {}
    spaces = {}
    for p in range(n + 1):
        for q in range(n + 1):
            basis = _monomial_basis(n, p, q)
            monos[(p, q)] = basis
            index_of[(p, q)] = {m: i for i, m in enumerate(basis)}
            spaces[(p, q)] = len(basis)

    def block(diff_gen, p, q, tp, tq):
        source = monos[(p, q)]
        target_index = index_of[(tp, tq)]
        rows = len(monos[(tp, tq)])
        cols = []
        for mono in source:
            col = [SC_ZERO] * rows
            for m, c in _element_diff(diff_gen, {mono: SC_ONE}).items():
                col[target_index[m]] = c
            cols.append(col)
        return Matrix(rows, len(source), cols)

    del_maps = {}
    delbar_maps = {}
    for p in range(n + 1):
        for q in range(n + 1):
            if p < n:
                del_maps[(p, q)] = block(del_gen, p, q, p + 1, q)
            if q < n:
                delbar_maps[(p, q)] = block(delbar_gen, p, q, p, q + 1)

    conj_maps = {}
    for p in range(n + 1):
        for q in range(n + 1):
            rows = spaces[(q, p)]
            sign = _SIGN_SCALARS[(-1) ** (p * q)]
            cols = []
            for (mi, mj) in monos[(p, q)]:
                col = [SC_ZERO] * rows
                col[index_of[(q, p)][(mj, mi)]] = sign
                cols.append(col)
            conj_maps[(p, q)] = Matrix(rows, len(monos[(p, q)]), cols)

    def multiply(bid_a, vec_a, bid_b, vec_b):
        tp, tq = bid_a[0] + bid_b[0], bid_a[1] + bid_b[1]
        target = index_of.get((tp, tq))
        if target is None:
            return []
        out = [SC_ZERO] * spaces[(tp, tq)]
        basis_a = monos[bid_a]
        basis_b = monos[bid_b]
        for ia, ca in enumerate(vec_a):
            if not ca:
                continue
            for ib, cb in enumerate(vec_b):
                if not cb:
                    continue
                wedged = _wedge_monomials(basis_a[ia], basis_b[ib])
                if wedged is None:
                    continue
                sign, mono = wedged
                idx = target[mono]
                out[idx] = out[idx] + ca * cb * _SIGN_SCALARS[sign]
        return out

    def fundamental(vec):
        return vec[0] if vec else SC_ZERO

    unit = [SC_ONE]
    product = ProductStructure(multiply=multiply, unit=unit,
                               fundamental_class_functional=fundamental)
    out = Bicomplex(spaces, del_maps, delbar_maps, n=n, label=label,
                    product=product,
                    conj=ConjugationStructure(maps=conj_maps))
    # Attach the product only when the top functional demonstrably kills
    # boundaries in bidegree (n, n): equivalent, since that space is a
    # line, to both differentials into (n, n) vanishing.
    if not (out.del_map(n - 1, n).is_zero()
            and out.delbar_map(n, n - 1).is_zero()):
        out = Bicomplex(spaces, del_maps, delbar_maps, n=n, label=label,
                        product=None,
                        conj=ConjugationStructure(maps=conj_maps))
    ensure_valid(out)
    return out


def torus(n):
    """Exterior algebra with zero differentials; n = 0 is a single point."""
    return from_structure_equations(
        StructureEquationSpec(n=n, differentials={}), label=f"torus-{n}")


def iwasawa():
    """Complex-dimension-3 model with d(w3) = -w1^w2."""
    spec = StructureEquationSpec(
        n=3,
        differentials={3: ((SC_MINUS_ONE, ("w", 1), ("w", 2)),)})
    return from_structure_equations(spec, label="iwasawa")


def kodaira_surface():
    """Complex-dimension-2 model with d(w2) = w1^cw1."""
    spec = StructureEquationSpec(
        n=2,
        differentials={2: ((SC_ONE, ("w", 1), ("cw", 1)),)})
    return from_structure_equations(spec, label="kodaira-surface")


_N_LINE = re.compile(r"^n\s*=\s*(\d+)$")
_D_LINE = re.compile(r"^d\s+w(\d+)\s*=\s*(.*)$")
_TERM = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?:(?P<scalar>[^*]+?)\s*\*)?\s*"
    r"(?P<g1>c?w\d+)\s*\^\s*(?P<g2>c?w\d+)")


def _parse_generator(token):
    if token.startswith("cw"):
        return ("cw", int(token[2:]))
    return ("w", int(token[1:]))


def parse_structure_text(text):
    """Parse the structure-equation text format into a spec.

    Grammar, one statement per line (blank lines and ``#`` comments are
    ignored)::

        n = <int>
        d w<k> = <expr>

    where ``<expr>`` is ``0`` or a sum of terms ``<scalar>* <gen>^<gen>``
    (the scalar factor is optional) with generators ``w<i>`` / ``cw<i>``
    and scalars in the exact string format ("p/q", "p/q+r/s i", ...).
    """
    n = None
    differentials = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _N_LINE.match(line)
        if m:
            if n is not None:
                raise StructureEquationError(
                    f"line {lineno}: duplicate n declaration")
            n = int(m.group(1))
            continue
        m = _D_LINE.match(line)
        if not m:
            raise StructureEquationError(
                f"line {lineno}: cannot parse {line!r}")
        if n is None:
            raise StructureEquationError(
                f"line {lineno}: n must be declared before equations")
        k = int(m.group(1))
        if k in differentials:
            raise StructureEquationError(
                f"line {lineno}: duplicate equation for w{k}")
        expr = m.group(2).strip()
        if expr == "0":
            differentials[k] = ()
            continue
        terms = []
        pos = 0
        first = True
        while pos < len(expr):
            match = _TERM.match(expr, pos)
            if not match:
                raise StructureEquationError(
                    f"line {lineno}: cannot parse term starting at "
                    f"{expr[pos:]!r}")
            if not first and match.group("sign") is None:
                raise StructureEquationError(
                    f"line {lineno}: missing +/- between terms near "
                    f"{expr[pos:]!r}")
            try:
                coeff = (ExactScalar.parse(match.group("scalar"))
                         if match.group("scalar") else SC_ONE)
            except ValueError as exc:
                raise StructureEquationError(
                    f"line {lineno}: bad scalar "
                    f"{match.group('scalar')!r}: {exc}") from exc
            if match.group("sign") == "-":
                coeff = -coeff
            terms.append((coeff,
                          _parse_generator(match.group("g1")),
                          _parse_generator(match.group("g2"))))
            pos = match.end()
            first = False
        differentials[k] = tuple(terms)
    if n is None:
        raise StructureEquationError("missing n declaration")
    return StructureEquationSpec(n=n, differentials=differentials)


class RandomBicomplex(NamedTuple):
    """A scrambled random complex plus its ground-truth part multiset."""

    bicomplex: Bicomplex
    parts: tuple


_KIND_WEIGHTS = {"dot": 0.3, "square": 0.2, "zigzag": 0.5}


def random_bicomplex(seed, max_parts=6, max_length=5,
                     region=((0, 5), (0, 5)), *,
                     kinds=("dot", "square", "zigzag"), symmetric=False):
    """Seeded random complex assembled from indecomposable parts.

    Draws up to ``max_parts`` parts (dots, squares, zigzags with 2 to
    ``max_length`` dots) inside ``region = ((p_lo, p_hi), (q_lo, q_hi))``,
    stacks them, and scrambles the bases with seeded invertible matrices.
    Returns the complex together with the ground-truth multiset of parts
    (canonically sorted) for round-trip testing.  Identical arguments give
    bit-identical results.

    With ``symmetric=True`` the part multiset is closed under mirroring
    across the diagonal, the region must be diagonal-symmetric with
    non-negative bounds, and the result declares n = the upper bound and
    carries a verified conjugation structure.
    """
    from . import zigzag as zz

    (p_lo, p_hi), (q_lo, q_hi) = region
    if p_hi < p_lo or q_hi < q_lo:
        raise ValueError("empty region")
    if symmetric:
        if (p_lo, p_hi) != (q_lo, q_hi):
            raise ValueError("symmetric mode needs a diagonal-symmetric "
                             "region")
        if p_lo < 0:
            raise ValueError("symmetric mode needs non-negative bounds")
    rng = random.Random(seed)
    kinds = tuple(kinds)
    weights = [_KIND_WEIGHTS[k] for k in kinds]
    parts = []
    n_parts = rng.randint(1, max_parts)
    while len(parts) < n_parts:
        kind = rng.choices(kinds, weights)[0]
        if kind == "square" and (p_hi - p_lo < 1 or q_hi - q_lo < 1):
            kind = "dot"
        if kind == "zigzag" and max_length < 2:
            kind = "dot"
        if kind == "dot":
            part = zz.Zigzag.from_path(
                ((rng.randint(p_lo, p_hi), rng.randint(q_lo, q_hi)),))
        elif kind == "square":
            part = zz.Square(anchor=(rng.randint(p_lo, p_hi - 1),
                                     rng.randint(q_lo, q_hi - 1)))
        else:
            length = rng.randint(2, max_length)
            first_role = rng.choice(("source", "sink"))
            length = _fit_length(length, first_role,
                                 p_hi - p_lo, q_hi - q_lo)
            p_steps, q_steps = _zigzag_extent(length, first_role)
            start = (rng.randint(p_lo, p_hi - p_steps),
                     rng.randint(q_lo + q_steps, q_hi))
            part = zz.Zigzag.from_path(
                _zigzag_dots(start, first_role, length))
        parts.append(part)
        if symmetric:
            mirrored = zz.mirror_part(part)
            if mirrored != part:
                parts.append(mirrored)
    base = zz.synthesize(parts)
    conj_maps = zz.standard_conjugation(parts) if symmetric else None
    scramble = zz.scramble_matrices(base, rng.randint(0, 2 ** 31))
    scrambled = zz.apply_basis_change(base, scramble)
    n = p_hi if symmetric else None
    conj = None
    if symmetric:
        maps = {}
        for (p, q), c0 in conj_maps.items():
            s_here = scramble.get((p, q))
            s_mirror = scramble.get((q, p))
            if s_here is None or s_mirror is None:
                maps[(p, q)] = c0
            else:
                maps[(p, q)] = (inverse(s_mirror) @ c0
                                @ s_here.conjugate_entries())
        conj = ConjugationStructure(maps=maps)
    out = Bicomplex(
        {(p, q): scrambled.dimension(p, q) for (p, q) in scrambled.support()},
        scrambled.del_blocks(), scrambled.delbar_blocks(),
        n=n, label=f"random-{seed}", conj=conj)
    ensure_valid(out)
    return RandomBicomplex(out, zz.sort_parts(parts))


def _zigzag_extent(length, first_role):
    steps = length - 1
    if first_role == "source":
        p_steps = (steps + 1) // 2
    else:
        p_steps = steps // 2
    return p_steps, steps - p_steps


def _fit_length(length, first_role, p_room, q_room):
    while length > 1:
        p_steps, q_steps = _zigzag_extent(length, first_role)
        if p_steps <= p_room and q_steps <= q_room:
            return length
        length -= 1
    return 1


def _zigzag_dots(start, first_role, length):
    dots = [start]
    p, q = start
    role_source = first_role == "source"
    for _ in range(length - 1):
        if role_source:
            p += 1
        else:
            q -= 1
        dots.append((p, q))
        role_source = not role_source
    return tuple(dots)
