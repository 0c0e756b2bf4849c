"""Digital models of manifolds: intersection graphs of LCL covers, normality,
clique-complex invariants, contractible transformations and digitization."""

from .constructions import (SurfaceKind, brick_tiling, circle_cover, minimal_sphere,
                            quotient_surface_model)
from .digitizer import (GridSpec, ImplicitObject, RefinementReport, builtin_object, digitize,
                        digitize_lcl, refinement_experiment, select_cells)
from .geometry import (Box, Cover, CoverError, coarsen, consistency_check, intersection_graph,
                       is_locally_centered, lcl_certificate, lump_certificate, restrict_to_element)
from .graph_core import (DigitalSpace, ball, complete_graph, cycle_graph, enumerate_cliques,
                         is_isomorphic, joint_rim, maximal_cliques, rim)
from .invariants import InvariantReport, betti_numbers_gf2, euler_characteristic, invariant_report
from .normality import NormalityVerdict, infer_dimension, is_normal_space
from .transformations import (Move, MoveKind, apply_move, enumerate_moves, equivalent_by_moves,
                              is_contractible, reduce)

__version__ = "0.1.0"
