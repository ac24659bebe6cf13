"""Exact consistency checks and natural extensions for finite lower previsions."""

from .core import (Assessment, ConditionalGamble, DegenerateInputError, DomainError, Event,
                   ExtendedRational, Gamble, NEG_INF, POS_INF, Partition,
                   PowersetLowerProbability, PreconditionError, Universe,
                   UnsupportedDomainError, conditional_inf, conditional_sup, conjugate_upper,
                   decumulative_event, format_decimal, format_rational, to_rational)
from .consistency import (ConsistencyVerdict, Witness, ausl_bound, check_1asl, check_2coherent,
                          check_2coherent_powerset, check_2convex, check_2monotone, check_asl,
                          check_coherent, check_convex, envelope_assessment, gain_supremum,
                          one_ausl_bound)
from .extensions import (ExtensionResult, FormulaMismatch, SubspaceDomain, e2_lp, e2_powerset,
                         e2c_direct, e2c_plus_subspace, e2c_powerset, e_lp, e_subspace, ec_lp,
                         finiteness_report)
from .choquet import (Capacity, ChoquetExtension, choquet_extension, choquet_integral,
                      choquet_layer, choquet_signed, comonotone)
from .gn import (ConditionalEvent, FullConditionalAssessment, gn_leq, gn_lower_extension,
                 gn_upper_extension, inner_conditional, inner_event, outer_conditional,
                 outer_event)

__all__ = [name for name in dir() if not name.startswith("_")]
