"""Sequential Monte Carlo adequacy assessment of cyber-physical multi-microgrid systems."""
from .adequacy import AdequacyLedger, AdequacyReport, coefficient_of_variation, histogram, run_ibgc_sber
from .casemodel import CaseError, CaseModel, load_bundled_case, parse_case, parse_case_document
from .cybernet import CyberModel, Scenario
from .dispatch.config import DispatchConfig, JointDispatchConfig, PredictionPolicy
from .engine import ScenarioError, Simulation, SimulationConfig, scenario_transform, simulate
from .invariants import InvariantMonitor
from .sampler import Sampler, contingency_windows
from .series import ExogenousSeries, build_series, synthetic_series
from .zoning import Zoner

__version__ = "0.1.0"
