"""Dimension and point-count engines for unipotent groups attached to F-crystals."""
from .count import CountResult, DimCertificate, count_points, dim_from_counts
from .isogeny import IsogenyType, SolverConfig, isogeny_type, layer_dim
from .ore import (TwistedPoly, hom_dim_mod_p, kernel_dim_mod_p, ore_divmod, ore_rank,
                  skew_hom_dim_mod_p, system_dim_mod_p)
from .prop36 import prop36_closed, prop36_direct, prop36_layers
from .skew import skew_system

__all__ = ["TwistedPoly", "ore_divmod", "ore_rank", "kernel_dim_mod_p", "system_dim_mod_p",
           "hom_dim_mod_p", "skew_hom_dim_mod_p", "CountResult", "DimCertificate",
           "count_points", "dim_from_counts", "IsogenyType", "SolverConfig", "isogeny_type",
           "layer_dim", "prop36_closed", "prop36_direct", "prop36_layers", "skew_system"]
