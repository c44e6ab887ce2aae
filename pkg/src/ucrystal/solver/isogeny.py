"""Isogeny type (n_1 <= ... <= n_r) of U_M from the layer dimensions d_j = dim U[p^j]."""
import time
from dataclasses import dataclass, field

from ..crystal import mod_wedge2
from ..errors import BudgetExceeded, Inconclusive
from ..ffield import is_prime
from ..npoly import np_dim_wedge, partition_of_layers
from .count import count_points, dim_from_counts
from .ore import kernel_dim_mod_p


@dataclass
class SolverConfig:
    degrees: tuple = None           # extension degrees for counting; None = 1 then primes != p
    max_primes: int = 5
    budget_seconds: float = 600.0
    engine: str = "auto"
    budget_nodes: int = 2_000_000   # only used by the layered-search engine
    use_closed_form: bool = True
    strict: bool = False            # reject layers that are only corroborated


@dataclass
class IsogenyType:
    parts: list
    total: int
    layers: list                    # d_1, d_2, ...
    certificates: list = field(default_factory=list)
    label: str = ""

    @property
    def r(self):
        return len(self.parts)

    @property
    def pexp(self):
        return max(self.parts) if self.parts else 0

    def to_doc(self):
        return {"label": self.label, "D": self.total, "d_layers": self.layers,
                "partition": self.parts, "certificates": self.certificates}


def count_degrees(p, k=5):
    out = [1]
    r = 2
    while len(out) < k + 1:
        if is_prime(r) and r != p:
            out.append(r)
        r += 1
    return out


def closed_form_bounds(prev, d1, D, j, g):
    """Bounds on d_j from monotone increments, the total D and the exponent bound n_r <= g-1."""
    last_inc = prev[-1] - (prev[-2] if len(prev) > 1 else 0)
    hi = min(D, prev[-1] + last_inc)
    rest = D - prev[-1]
    left = (g - 1) - (j - 1)        # layers j .. g-1 still to absorb the rest
    if left <= 0:
        lo = D
    else:
        lo = prev[-1] + -(-rest // left)
    return lo, hi


def layer_dim(L, n, config=None, lower=None, upper=None, deadline=None):
    """d_n with a certificate, from counts on the prime ladder of extension degrees."""
    config = config or SolverConfig()
    p = L.ctx.p
    degs = list(config.degrees) if config.degrees else count_degrees(p, config.max_primes)
    counts = []
    cert = None
    for m in degs:
        if deadline is not None and time.perf_counter() > deadline:
            raise BudgetExceeded(f"time budget exhausted at layer {n}", {"degrees": [c.m for c in counts]})
        counts.append(count_points(L, n, m, engine=config.engine, budget_nodes=config.budget_nodes))
        if len(counts) >= 2:
            cert = dim_from_counts(counts, lower, upper)
            if cert.certified:
                break
    if cert is None:
        raise Inconclusive("need at least two extension degrees")
    return cert, counts


def isogeny_type(M, config=None, nu=None, jmax=None):
    """Partition of the isogeny type of U_M, each layer certified or Inconclusive raised."""
    config = config or SolverConfig()
    t0 = time.perf_counter()
    deadline = t0 + config.budget_seconds
    nu = nu or M.newton_polygon()
    g = M.rank // 2
    D = np_dim_wedge(nu)
    L = mod_wedge2(M.rebuild(precision=1))
    d1 = kernel_dim_mod_p(L)
    layers = [d1]
    certs = [{"layer": 1, "engine": "ore", "d": d1}]
    if D == 0 or d1 == 0:
        if D != d1:
            raise Inconclusive(f"d_1 = {d1} but the closed-form dimension is {D}",
                               partial={"layers": layers})
        return IsogenyType([], D, layers, certs, M.label)
    jmax = jmax or max(g - 1, 1) + 1
    j = 1
    while layers[-1] < D:
        j += 1
        if j > jmax:
            raise Inconclusive(f"layers {layers} have not reached D = {D}",
                               partial={"layers": layers})
        lo, hi = closed_form_bounds(layers, d1, D, j, g) if config.use_closed_form else (None, None)
        Lj = mod_wedge2(M.rebuild(precision=j))
        try:
            cert, counts = layer_dim(Lj, j, config, lo, hi, deadline)
        except BudgetExceeded as e:
            raise BudgetExceeded(str(e), e.stats, {"layers": layers, "D": D}) from None
        except Inconclusive as e:
            raise Inconclusive(f"layer {j}: {e}", partial={"layers": layers, "D": D}) from None
        rec = {"layer": j, "engine": counts[-1].engine, "d": cert.d, "status": cert.status,
               "reason": cert.reason, "bounds": [lo, hi],
               "log_counts": {c.m: c.log_count for c in counts}}
        certs.append(rec)
        if not (cert.certified or (cert.accepted and not config.strict)):
            raise Inconclusive(f"layer {j} not certified: {cert.reason}",
                               partial={"layers": layers + [cert.d], "D": D, "certificates": certs})
        if cert.d < layers[-1]:
            raise Inconclusive(f"layer {j} decreased", partial={"layers": layers})
        if cert.d == layers[-1]:
            raise Inconclusive(f"layers stalled at {cert.d} < D = {D}", partial={"layers": layers})
        layers.append(cert.d)
    parts = partition_of_layers(layers)
    if sum(parts) != D:
        raise Inconclusive(f"partition {parts} does not sum to D = {D}", partial={"layers": layers})
    return IsogenyType(parts, D, layers, certs, M.label)
