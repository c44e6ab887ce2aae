"""Expected tables, embedded as immutable data.

Each row carries a ``source`` string naming the table it was copied from:
"threefolds" (classification of U for abelian threefolds by Newton polygon and
a-number), "eo3" (the same classification keyed by Ekedahl-Oort type) and
"isogeny-types" (Newton polygon, dimension and isogeny type for g <= 6).
"""
from dataclasses import dataclass
from types import MappingProxyType


@dataclass(frozen=True)
class AppendixRow:
    g: int
    newton: str          # NewtonPolygon.parse syntax
    dim: int
    parts: tuple
    source: str = "isogeny-types"

    @property
    def key(self):
        return f"g{self.g}:{self.newton}"


@dataclass(frozen=True)
class ThreefoldRow:
    np_class: str        # ss, 1/3, alm-ss, alm-ord, ord
    a: int
    dim_p: int           # dim U[p]
    dim: int             # dim U
    parts: tuple         # isogeny type as a partition
    words: tuple         # Kraft words of the BT1 with these invariants
    recipe: MappingProxyType
    polarised: bool      # the representative carries a known principal quasi-polarisation
    source: str = "threefolds"

    @property
    def key(self):
        return f"{self.np_class}:a{self.a}"


@dataclass(frozen=True)
class EORow:
    phi: tuple
    a: int
    p_rank: int
    np_class: str
    parts: tuple
    source: str = "eo3"

    @property
    def key(self):
        return "".join(map(str, self.phi)) + ":" + self.np_class


NP_STRINGS = MappingProxyType({
    "ss": "1/2x3",
    "1/3": "1/3,2/3",
    "alm-ss": "0/1,1/2x2,1/1",
    "alm-ord": "0/1x2,1/2,1/1x2",
    "ord": "0/1x3,1/1x3",
})


def _simple(c, d):
    return {"simple": [c, d]}


def _fgv(g):
    return {"cyclic": {"g": g, "coeffs": [1] + [0] * (2 * g - 1) + [-1]}}


def _dsum(*parts):
    return MappingProxyType({"dsum": list(parts)})


def _frozen(doc):
    return MappingProxyType(doc)


APPENDIX = (
    AppendixRow(3, "1/2x3", 3, (1, 2)),
    AppendixRow(3, "1/3,2/3", 2, (1, 1)),
    AppendixRow(4, "1/2x4", 6, (1, 2, 3)),
    AppendixRow(4, "1/3,1/2,2/3", 4, (1, 1, 2)),
    AppendixRow(4, "1/4,3/4", 3, (1, 1, 1)),
    AppendixRow(5, "1/2x5", 10, (1, 2, 3, 4)),
    AppendixRow(5, "2/5,3/5", 8, (1, 2, 2, 3)),
    AppendixRow(5, "1/3,1/2x2,2/3", 7, (1, 1, 2, 3)),
    AppendixRow(5, "1/4,1/2,3/4", 5, (1, 1, 1, 2)),
    AppendixRow(5, "1/5,4/5", 4, (1, 1, 1, 1)),
    AppendixRow(6, "1/2x6", 15, (1, 2, 3, 4, 5)),
    AppendixRow(6, "2/5,1/2,3/5", 12, (1, 2, 2, 3, 4)),
    AppendixRow(6, "1/3,1/2x3,2/3", 11, (1, 1, 2, 3, 4)),
    AppendixRow(6, "1/3,1/3,2/3,2/3", 10, (1, 2, 2, 2, 3)),
    AppendixRow(6, "1/4,1/2,1/2,3/4", 8, (1, 1, 1, 2, 3)),
    AppendixRow(6, "1/5,1/2,4/5", 6, (1, 1, 1, 1, 2)),
    AppendixRow(6, "1/6,5/6", 5, (1, 1, 1, 1, 1)),
)

THREEFOLDS = (
    ThreefoldRow("ss", 3, 3, 3, (1, 1, 1), ("[FV]^3",),
                 _dsum(_simple(1, 1), _simple(1, 1), _simple(1, 1)), True),
    ThreefoldRow("ss", 2, 3, 3, (1, 1, 1), ("[FV][F2V2]", "[FVF2V2]", "[VFV2F2]"),
                 _dsum(_simple(1, 1), _fgv(2)), True),
    ThreefoldRow("ss", 1, 2, 3, (1, 2), ("[F3V3]",), _frozen(_fgv(3)), True),
    ThreefoldRow("1/3", 2, 2, 2, (1, 1), ("[F2V][V2F]",),
                 _dsum(_simple(1, 2), _simple(2, 1)), True),
    # no polarised integral module is exhibited for this row: E/(F^3 + p - V^3) has the
    # right slopes and a-number, but a principal quasi-polarisation is not verified
    ThreefoldRow("1/3", 1, 2, 2, (1, 1), ("[F3V3]",),
                 _frozen({"cyclic": {"g": 3, "coeffs": [1, 0, 0, 3, 0, 0, -1]}}), False),
    ThreefoldRow("alm-ss", 2, 1, 1, (1,), ("[F][V][FV]^2",),
                 _dsum(_simple(0, 1), _simple(1, 1), _simple(1, 1), _simple(1, 0)), True),
    ThreefoldRow("alm-ss", 1, 1, 1, (1,), ("[F][V][F2V2]",),
                 _dsum(_simple(0, 1), _fgv(2), _simple(1, 0)), True),
    ThreefoldRow("alm-ord", 1, 0, 0, (), ("[F]^2[V]^2[FV]",),
                 _dsum(_simple(0, 1), _simple(0, 1), _simple(1, 1), _simple(1, 0), _simple(1, 0)),
                 True),
    ThreefoldRow("ord", 0, 0, 0, (), ("[F]^3[V]^3",),
                 _dsum(*([_simple(0, 1)] * 3 + [_simple(1, 0)] * 3)), True),
)

EO3 = (
    EORow((0, 0, 0), 3, 0, "ss", (1, 1, 1)),
    EORow((0, 0, 1), 2, 0, "ss", (1, 1, 1)),
    EORow((0, 1, 2), 1, 0, "ss", (1, 2)),
    EORow((0, 1, 2), 1, 0, "1/3", (1, 1)),
    EORow((0, 1, 1), 2, 0, "1/3", (1, 1)),
    EORow((1, 1, 1), 2, 1, "alm-ss", (1,)),
    EORow((1, 1, 2), 1, 1, "alm-ss", (1,)),
    EORow((1, 2, 2), 1, 2, "alm-ord", ()),
    EORow((1, 2, 3), 0, 3, "ord", ()),
)


def threefold_row(np_class, a):
    for r in THREEFOLDS:
        if r.np_class == np_class and r.a == a:
            return r
    return None
