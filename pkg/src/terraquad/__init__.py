"""Largest base-anchored convex quadrilateral and axis-parallel rectangle in a 1.5D terrain."""
__version__ = "0.1.0"

from .geometry_kernel import EPS, Line, Point, Segment, Tolerance  # noqa: E402
from .terrain_model import (Quad, Rect, Terrain, ValidationError, load_terrain, mirror,  # noqa: E402
                            save_terrain, validate)
from .instance_gen import PROFILES, GenConfig, generate  # noqa: E402
from .candidate_chords import CandidateEdge, candidate_edges, shortest_path_tree  # noqa: E402
from .quad_solver import SolveReport, max_quad  # noqa: E402
from .rect_solver import inscribed_half_rectangle, max_rect  # noqa: E402
