"""wsikit: subsumption checking for conjunctive modal fixpoint logics.

The pipeline: parse a conjunctive sentence, flatten it to an equation
system, build its simulation-initial model by greatest-fixpoint
saturation of one-step constructions read off the logic's tableau
rules, then decide subsumption by model checking the query at the root.
A bounded brute-force oracle provides independent verification.
"""

from .builder import (AbstractWsiModel, WsiState, build_wsi, collapse_dag,
                      export_model, export_model_json, size_report,
                      unfold_tree)
from .checker import (Verdict, decide_subsumption, decide_subsumption_tbox,
                      extension, model_check, subsumes, subsumes_tbox)
from .formulas import (And, Atom, Bot, Formula, FragmentError, Modal, Mu, Nu,
                       Or, ParseError, Top, Var, atoms, conj, modal_depth,
                       parse_formula, print_formula, validate_conjunctive)
from .normalform import EquationSystem, reconstitute, shallow_normal_form
from .onestep import OneStepFormula
from .onestep_wsi import (Classification, ConvexityError, OneStepWsiModel,
                          build_onestep_wsi_generic,
                          build_onestep_wsi_special, classify)
from .rules import (ConvexityCounterexample, Match, RuleInstance,
                    check_convexity_preservation, match_rules,
                    one_step_consequence, rule_set)
from .signatures import Mod, Signature, SignatureError, signature
from .tboxes import TBox, TBoxError, parse_tbox, tbox_to_nu

__version__ = "0.1.0"

__all__ = [
    "AbstractWsiModel", "And", "Atom", "Bot", "Classification",
    "ConvexityCounterexample", "ConvexityError", "EquationSystem", "Formula",
    "FragmentError", "Match", "Mod", "Modal", "Mu", "Nu", "OneStepFormula",
    "OneStepWsiModel", "Or", "ParseError", "RuleInstance", "Signature",
    "SignatureError", "TBox", "TBoxError", "Top", "Var", "Verdict",
    "WsiState", "atoms", "build_onestep_wsi_generic",
    "build_onestep_wsi_special", "build_wsi", "check_convexity_preservation",
    "classify", "collapse_dag", "conj", "decide_subsumption",
    "decide_subsumption_tbox", "export_model", "export_model_json",
    "extension", "match_rules", "modal_depth", "model_check",
    "one_step_consequence", "parse_formula", "parse_tbox", "print_formula",
    "reconstitute",
    "rule_set", "shallow_normal_form", "signature", "size_report",
    "subsumes", "subsumes_tbox", "tbox_to_nu", "unfold_tree",
    "validate_conjunctive",
]
