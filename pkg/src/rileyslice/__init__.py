"""Farey words, trace polynomials, pleating rays and membership
certificates for the Riley slice of two-parabolic groups, plus the Moebius
machinery to draw the associated limit sets and isometric-circle
configurations."""

from .words import (FareyWord, Letter, Slope, StructureReport, enumerate_slopes,
                    farey_word, word_report)
from .polynomials import (ConjectureReport, FareyPolyPair, IntPoly, PolyMatrix2,
                          factor_shape, farey_matrix, fricke_check,
                          generator_matrices, superattractor_check, trace_polys,
                          word_matrix)
from .roots import (CuspPoint, NonConvergence, RootSet, cusp_point,
                    ray_extension_spectrum, solve_level, squarefree_decomposition)
from .rays import (AsymptoticDirections, BoundaryIndeterminate, ContinuationFailed,
                   ContinuationStalled, CuspMismatch, NeighbourhoodResult, Ray,
                   asymptotic_directions, in_neighbourhood, trace_level_curve,
                   trace_ray)
from .membership import (Budget, Certificate, Grade, GridPointResult, InvalidInput,
                         Verdict, classify, forward_chain_test, hull_margin,
                         julia_trap_test, lu_hull_test, scan_grid, shimizu_test,
                         soundness_certificates)
from .mobius import (Circle, CircleOrLine, CommutingGenerators, HolonomyData,
                     InfinityFixed, IsometricDisks, Line, Mobius, apply_to_circle,
                     classify_element, farey_mobius, holonomy, isometric_disks,
                     mobius_from_word, normalize_two_parabolics)
from .kleinian import (DegenerateC, FundamentalDomain, LimitSetSample, ell_segment,
                       fundamental_domain, limit_set_points, quasiline_orbit,
                       quasiline_width_probe, strip_bounds,
                       tangency_parabolic_point)
from .render import Raster, RenderJob, render

__version__ = "0.1.0"
