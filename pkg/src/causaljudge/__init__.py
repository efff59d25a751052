"""Exact-arithmetic causal judgments over finite structural causal models.

The package evaluates counterfactuals in finite-domain causal models and,
on top of them, actual causation, degrees of blameworthiness and
praiseworthiness, action costs, and intention, all with exact rational
arithmetic.  Scenarios live in a small JSON format; a shipped corpus covers
the classic dilemmas, and ``causaljudge`` exposes every judgment on the
command line.
"""

from .blame import (
    BlameReport,
    BlameRow,
    CostModel,
    CostViolation,
    PraiseResult,
    blame,
    blame_vs,
    cost,
    praise,
    validate_cost_vars,
)
from .cause import (
    Ac2Witness,
    CauseVerdict,
    but_for,
    check_cause,
    is_part_of_cause,
)
from .epistemic import (
    EpistemicState,
    UtilityFunction,
    delta,
    expected_utility,
    pinned_expected_utility,
    prob,
)
from .errors import (
    CyclicModelError,
    EmptyReferenceSet,
    EngineError,
    EquationTypeError,
    InvalidCostModel,
    InvalidM,
    InvalidN,
    ModelError,
    NotAConjunction,
    ParseError,
    PreconditionViolated,
    RangeViolation,
    ScenarioError,
    UnknownVariable,
    ValueNotInRange,
    VariableCapExceeded,
)
from .formulas import (
    FALSE,
    TRUE,
    AndF,
    BoolConst,
    Do,
    Formula,
    NotF,
    OrF,
    Prim,
    as_conjunction,
    check_formula,
    conjunction,
    formula_variables,
    holds,
    is_intervention_free,
    render_formula,
    satisfies,
)
from .intent import (
    AllOthers,
    CandidateCheck,
    DefaultOnly,
    DefaultPlus,
    Explicit,
    IntentVerdict,
    OutcomeVerdict,
    ReferencePolicy,
    action_intended,
    intends_outcome,
    intends_to_affect,
    resolve_ref,
)
from .model import (
    CausalModel,
    CausalSetting,
    Equation,
    Signature,
    intervene,
    outcome_under_action,
    render_expr,
    solve,
    topological_order,
    validate_model,
    world_under,
)
from .parsing import parse_expression, parse_formula
from .scenario import (
    Diagnostic,
    ScenarioDoc,
    ScenarioSetting,
    commons_doc,
    corpus_names,
    corpus_path,
    frankfurt_doc,
    load_corpus,
    load_scenario,
    parse_scenario,
    serialize,
    to_epistemic_state,
    validate,
)

__version__ = "0.1.0"
