"""Newton polygons as multisets of coprime pairs, and the closed-form dimensions."""
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import NonIntegerResult, NotCoprime, ParseError


def _pair_of_slope(s):
    s = Fraction(s)
    c, h = s.numerator, s.denominator
    return (c, h - c)


class NewtonPolygon:
    """Pairs (c, d, multiplicity); the slope of (c, d) is c/(c+d), with multiplicity c+d per copy."""

    def __init__(self, pairs):
        cnt = Counter()
        for item in pairs:
            c, d = int(item[0]), int(item[1])
            mult = int(item[2]) if len(item) > 2 else 1
            if c < 0 or d < 0 or (c, d) == (0, 0) or gcd(c, d) != 1:
                raise NotCoprime(f"({c},{d}) is not a coprime pair")
            if mult < 1:
                raise ValueError("multiplicity must be positive")
            cnt[(c, d)] += mult
        self.pairs = tuple(sorted(((c, d, k) for (c, d), k in cnt.items()),
                                  key=lambda t: (Fraction(t[0], t[0] + t[1]), t[0])))

    @classmethod
    def from_slopes(cls, slopes):
        cnt = Counter(Fraction(s) for s in slopes)
        pairs = []
        for s, k in cnt.items():
            c, d = _pair_of_slope(s)
            if k % (c + d):
                raise NonIntegerResult(f"slope {s} has multiplicity {k}, not a multiple of {c + d}")
            pairs.append((c, d, k // (c + d)))
        return cls(pairs)

    @classmethod
    def parse(cls, text, symmetric_complete=False):
        """Parse "1/2x3, 1/3, 2/3": slope tokens a/b with an optional xN multiplicity."""
        pairs = []
        pos = 0
        for raw in text.split(","):
            tok = raw.strip()
            start = pos + (len(raw) - len(raw.lstrip()))
            pos += len(raw) + 1
            if not tok:
                raise ParseError("empty slope token", start)
            mt = re.fullmatch(r"(\d+)\s*/\s*(\d+)(?:\s*[xX×*]\s*(\d+))?", tok)
            if mt is None:
                raise ParseError(f"not a slope token (write a/b with optional xN): {tok!r}", start)
            a, b = int(mt.group(1)), int(mt.group(2))
            if b == 0 or a > b:
                raise ParseError(f"slope out of range: {tok!r}", start)
            mult = int(mt.group(3)) if mt.group(3) else 1
            if mult < 1:
                raise ParseError("multiplicity must be positive", start)
            c, d = _pair_of_slope(Fraction(a, b))
            pairs.append((c, d, mult))
        nu = cls(pairs)
        if symmetric_complete:
            nu = nu.symmetric_completion()
        return nu

    def symmetric_completion(self):
        cnt = Counter({(c, d): k for c, d, k in self.pairs})
        out = Counter(cnt)
        for (c, d), k in cnt.items():
            if (d, c) != (c, d):
                out[(d, c)] = max(out[(d, c)], k)
        return NewtonPolygon([(c, d, k) for (c, d), k in out.items()])

    def expanded(self):
        return [(c, d) for c, d, k in self.pairs for _ in range(k)]

    def slopes(self):
        return [Fraction(c, c + d) for c, d in self.expanded() for _ in range(c + d)]

    @property
    def height(self):
        return sum((c + d) * k for c, d, k in self.pairs)

    @property
    def g(self):
        h = self.height
        if h % 2:
            raise NonIntegerResult("odd height")
        return h // 2

    def is_symmetric(self):
        cnt = {(c, d): k for c, d, k in self.pairs}
        return all(cnt.get((d, c)) == k for (c, d), k in cnt.items())

    def __eq__(self, other):
        return isinstance(other, NewtonPolygon) and self.pairs == other.pairs

    def __hash__(self):
        return hash(self.pairs)

    def __str__(self):
        parts = []
        for c, d, k in self.pairs:
            s = f"{c}/{c + d}"
            parts.append(s if k == 1 else f"{s}x{k}")
        return ", ".join(parts)

    def __repr__(self):
        return f"NewtonPolygon({list(self.pairs)})"


def np_dim_wedge(nu):
    """dim U of wedge^2: sum m_i(m_i-1)/2 + sum_{i<j} min(c_i c_j, d_i d_j), m_i = min(c_i, d_i)."""
    flat = nu.expanded()
    tot = sum(min(c, d) * (min(c, d) - 1) // 2 for c, d in flat)
    for i in range(len(flat)):
        c1, d1 = flat[i]
        for j in range(i + 1, len(flat)):
            c2, d2 = flat[j]
            tot += min(c1 * c2, d1 * d2)
    return tot


def np_dim_tensor(nu1, nu2):
    """dim U of M1 (x) M2 for isoclinic pieces: sum over pairs of min(c c', d d')."""
    return sum(min(c1 * c2, d1 * d2) for c1, d1 in nu1.expanded() for c2, d2 in nu2.expanded())


def np_slopes_wedge(nu):
    s = sorted(nu.slopes())
    return sorted(s[i] + s[j] for i in range(len(s)) for j in range(i + 1, len(s)))


def np_dim_h2(h2_slopes):
    """g(g-1)/2 - sum_{lambda<1} (1 - lambda) m_lambda from the H^2 slope multiset."""
    if isinstance(h2_slopes, dict):
        items = [(Fraction(s), k) for s, k in h2_slopes.items()]
    else:
        items = list(Counter(Fraction(s) for s in h2_slopes).items())
    size = sum(k for _, k in items)
    g = 0
    while g * (2 * g - 1) < size:
        g += 1
    if g * (2 * g - 1) != size:
        raise NonIntegerResult(f"{size} slopes is not g(2g-1) for any g")
    val = Fraction(g * (g - 1), 2) - sum((1 - s) * k for s, k in items if s < 1)
    if val.denominator != 1:
        raise NonIntegerResult(f"non-integral dimension {val}")
    return int(val)


def np_pdiv_dim(slopes):
    """Dimension of the p-divisible group: sum (1 - lambda)."""
    if isinstance(slopes, dict):
        items = [(Fraction(s), k) for s, k in slopes.items()]
    else:
        items = list(Counter(Fraction(s) for s in slopes).items())
    val = sum((1 - s) * k for s, k in items)
    if Fraction(val).denominator != 1:
        raise NonIntegerResult(f"non-integral dimension {val}")
    return int(val)


def orbit_blocks(c1, d1, c2, d2):
    """Block label (0..3) of every 1-based index (i, j) of the tensor basis."""
    lab = {}
    for i in range(1, c1 + d1 + 1):
        for j in range(1, c2 + d2 + 1):
            lab[(i, j)] = (1 if i > d1 else 0) + (2 if j > d2 else 0)
    return lab


def _translate(x, c1, h1, c2, h2, sign=1):
    i, j = x
    i = (i - 1 + sign * c1) % h1 + 1
    j = (j - 1 + sign * c2) % h2 + 1
    return (i, j)


def orbit_relevant_chains(c1, d1, c2, d2):
    """Relevant chains of F acting on the basis of M_{c1,d1} (x) M_{c2,d2}.

    Returns a list of chains (vertex lists, first to last). A chain is relevant when
    it runs through S_1 u S_2, ends in S_0, and is preceded by a vertex of S_3.
    """
    for c, d in ((c1, d1), (c2, d2)):
        if c < 0 or d < 0 or (c, d) == (0, 0) or gcd(c, d) != 1:
            raise NotCoprime(f"({c},{d}) is not a coprime pair")
    h1, h2 = c1 + d1, c2 + d2
    lab = orbit_blocks(c1, d1, c2, d2)
    chains = []
    for x, b in sorted(lab.items()):
        if b != 0:
            continue
        chain = [x]
        y = _translate(x, c1, h1, c2, h2, -1)
        while lab[y] in (1, 2):
            chain.append(y)
            y = _translate(y, c1, h1, c2, h2, -1)
        if lab[y] == 3:
            chains.append(list(reversed(chain)))
    return chains


def np_orbit_chain_dim(c1, d1, c2, d2):
    return len(orbit_relevant_chains(c1, d1, c2, d2))


@dataclass
class Classification:
    g: int
    ordinary: bool
    almost_ordinary: bool
    supersingular: bool
    U_zero: bool
    U_is_Ga: bool
    p_rank: int
    a_number_bounds: tuple
    dim: int


def np_classify(nu):
    g = nu.g
    cnt = {(c, d): k for c, d, k in nu.pairs}
    f = cnt.get((0, 1), 0)
    others = {k: v for k, v in cnt.items() if k not in ((0, 1), (1, 0))}
    ordinary = not others
    almost = others == {(1, 1): 1} and f == g - 1
    ss = set(cnt) == {(1, 1)}
    dim = np_dim_wedge(nu)
    lo = 1 if g - f > 0 else 0
    return Classification(g, ordinary, almost, ss, dim == 0, dim == 1, f, (lo, g - f), dim)


@dataclass
class Verdict:
    ok: bool
    violations: list

    def __bool__(self):
        return self.ok


def np_isogeny_partition_checks(parts, nu=None, g=None, a_number=None, total=None):
    """Check sum n_i = D, n_r <= g - 1 and r >= a(a-1)/2."""
    parts = sorted(parts)
    bad = []
    if nu is not None:
        g = nu.g if g is None else g
        total = np_dim_wedge(nu) if total is None else total
    if total is not None and sum(parts) != total:
        bad.append(f"sum of parts {sum(parts)} != dim {total}")
    if g is not None and parts and parts[-1] > g - 1:
        bad.append(f"p-exponent {parts[-1]} exceeds g-1 = {g - 1}")
    if a_number is not None and len(parts) < a_number * (a_number - 1) // 2:
        bad.append(f"r = {len(parts)} < a(a-1)/2 = {a_number * (a_number - 1) // 2}")
    if any(x < 1 for x in parts):
        bad.append("parts must be positive")
    return Verdict(not bad, bad)


def layers_of_partition(parts, jmax):
    """d_j = sum_i min(n_i, j) for j = 1..jmax."""
    return [sum(min(x, j) for x in parts) for j in range(1, jmax + 1)]


def partition_of_layers(d):
    """Inverse of layers_of_partition: increments are conjugate to the partition."""
    inc = [d[0]] + [d[j] - d[j - 1] for j in range(1, len(d))]
    if any(inc[j] > inc[j - 1] for j in range(1, len(inc))) or any(x < 0 for x in inc):
        raise ValueError(f"layer dimensions {d} are not conjugate to a partition")
    parts = []
    top = inc[0] if inc else 0
    for i in range(1, top + 1):
        parts.append(sum(1 for x in inc if x >= i))
    return sorted(parts)


def symmetric_polygons(g):
    """Every symmetric Newton polygon of height 2g."""
    # symmetric = multiset of slopes <= 1/2 determines the rest
    lows = [(c, d) for h in range(1, 2 * g + 1) for c in range(0, h + 1)
            for d in [h - c] if gcd(c, d) == 1 and Fraction(c, h) < Fraction(1, 2)]
    out = []

    def rec(i, height, acc):
        # height counts both halves; (1,1) fills the rest
        if i == len(lows):
            rest = 2 * g - height
            if rest >= 0 and rest % 2 == 0:
                pairs = []
                for (c, d), k in acc:
                    pairs += [(c, d, k), (d, c, k)]
                if rest:
                    pairs.append((1, 1, rest // 2))
                out.append(NewtonPolygon(pairs))
            return
        c, d = lows[i]
        k = 0
        while height + 2 * k * (c + d) <= 2 * g:
            rec(i + 1, height + 2 * k * (c + d), acc + ([((c, d), k)] if k else []))
            k += 1

    rec(0, 0, [])
    return out
