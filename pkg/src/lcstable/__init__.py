"""Boolean function classes stable under the idempotent linear clone.

Invariants of Boolean functions, the nineteen named clones, classification of
generated stable classes with a brute-force oracle, stability verification,
and the analogue over GF(p).
"""

from .clones import CloneId, basis, bounded_basis, clone_leq, enumerate_clone, generate, generators, member, parse_clone
from .closure import (ALLCONST, CONST0, CONST1, EMPTY, INF, Block, ClassDescriptor, classify, closure_oracle,
                      complement_descriptor, descriptor_class, descriptor_leq, descriptor_meet, descriptor_member,
                      enumerate_descriptors, format_descriptor, graded, hasse_edges, is_lc_stable, parse_descriptor)
from .fnclass import FnClass
from .gfp import GFpFn, gfp_classify, gfp_closure_oracle, gfp_degree, interpolate, parse_gfp
from .stability import (TABLE3, StabilityRow, Verdict, Witness, compose_classes, left_stable, right_stable,
                        verify_table3)
from .zhegalkin import (BoolFn, LiteralError, MinorMap, Signature, add, anf, characteristic, charrank, compose,
                        degree, derivative, format_poly, from_anf, minor, minor_monomials, monster, negations,
                        parse_fn, polydeg, signature, star)

__all__ = [name for name in dir() if not name.startswith("_")]
