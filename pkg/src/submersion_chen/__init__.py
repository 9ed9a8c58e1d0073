"""Numerical verification of Chen-type inequalities for Riemannian submersions."""

__version__ = "0.1.0"

from .config import RunConfig, load_catalog, load_config
from .errors import ConfigError, GeometryError
from .expressions import Expression, parse_expression
from .frames import FramePair, Plane2, SmoothMap, SubmersionSetup, build_frames
from .inequalities import (InequalityReport, LemmaInstance, check_delta_hat,
                           check_horizontal_vertical, check_theorem, check_vertical,
                           chen_lemma_gap, equality_diagnostics)
from .invariants import extremal_sectional, invariant_bundle
from .metric import MetricField, riemann
from .oneill import compute_A, compute_T, oneill_data
from .report import ReportFile, emit_report, run_verify
from .space_forms import SpaceFormModel, StructureTensors, model_fit
from .tolerances import Tolerances
