"""Independent ground truth: explicit models, satisfaction, simulations,
bounded enumeration, counter-model search, concretization."""

from .concretize import WsiReport, concretize, export_concrete, verify_wsi
from .enumeration import BoundsError, enumerate_models, find_counter_model
from .models import (INF, ExplicitCoalgebra, GameFrame, KripkeModel,
                     MonotoneModel, Multigraph, load_model, model_from_json,
                     model_to_json, text_diagram)
from .onestep_oracle import (brute_consequence, carriers, concretize_onestep,
                             onestep_initiality_violations,
                             onestep_materialization_violations, onestep_sat,
                             transition_options)
from .semantics import ext_of, gfp_extension, local_sat, sat_explicit
from .simulation import (SimulationRelation, greatest_simulation,
                         is_simulation, simulates)

__all__ = [
    "BoundsError", "ExplicitCoalgebra", "GameFrame", "INF", "KripkeModel",
    "MonotoneModel", "Multigraph", "SimulationRelation", "WsiReport",
    "brute_consequence", "carriers", "concretize", "concretize_onestep",
    "enumerate_models", "export_concrete", "ext_of", "find_counter_model",
    "gfp_extension", "greatest_simulation", "is_simulation", "load_model",
    "local_sat", "model_from_json", "model_to_json",
    "onestep_initiality_violations", "onestep_materialization_violations",
    "onestep_sat", "sat_explicit", "simulates", "text_diagram",
    "transition_options", "verify_wsi",
]
