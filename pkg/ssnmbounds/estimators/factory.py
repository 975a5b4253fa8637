from ssnmbounds.errors import ConfigError
from ssnmbounds.estimators.classic import (HardThresholdingEstimator, IdentityEstimator, MLEstimator,
                                           OracleEstimator)
from ssnmbounds.estimators.unbiased import (CounterexampleEstimator, FamilyEstimator, Lemma2OptimalEstimator,
                                            counterexample_optimal_A)
from ssnmbounds.model.problem import validate_param

ESTIMATOR_KINDS = ("ml", "ht", "oracle", "identity", "family", "counterexample", "lemma2")


def build_estimator(spec, config, x=None, quad=None):
    """
    Build an estimator from a configuration mapping such as {"kind": "ht", "threshold": 2.0}.

    Args:
        spec (dict or str): Estimator description; a bare string is taken as the kind.
        config (ProblemConfig): Problem instance.
        x (SparseParam, optional): True parameter; the default support for "oracle"
            and the default reference for "lemma2".
        quad (QuadratureSpec, optional): Used when the counterexample A is "optimal".

    Returns:
        Estimator: The configured estimator.
    """
    if isinstance(spec, str):
        spec = {"kind": spec}
    spec = dict(spec or {"kind": "ml"})
    kind = spec.pop("kind", "ml")

    def take(name, default=None, required=False):
        if name in spec:
            return spec.pop(name)
        if required:
            raise ConfigError(f"estimator '{kind}' needs '{name}'")
        return default

    if kind == "ml":
        est = MLEstimator(config)
    elif kind == "identity":
        est = IdentityEstimator(config)
    elif kind == "ht":
        est = HardThresholdingEstimator(config, take("threshold"))
    elif kind == "oracle":
        support = take("support", None if x is None else x.support, required=x is None)
        est = OracleEstimator(config, support)
    elif kind == "family":
        est = FamilyEstimator(config, take("a", required=True), take("c", required=True), take("d", required=True))
    elif kind == "counterexample":
        A = take("A", "optimal")
        if A == "optimal":
            A = counterexample_optimal_A(config, quad)
        est = CounterexampleEstimator(config, A)
    elif kind == "lemma2":
        x_ref = take("x_ref")
        if x_ref is not None:
            x_ref = validate_param(x_ref, config)
        elif x is not None:
            x_ref = x
        else:
            raise ConfigError("estimator 'lemma2' needs 'x_ref'")
        est = Lemma2OptimalEstimator(config, x_ref)
    else:
        raise ConfigError(f"unknown estimator kind '{kind}' (expected one of {', '.join(ESTIMATOR_KINDS)})")

    if spec:
        raise ConfigError(f"unknown keys for estimator '{kind}': {sorted(spec)}")
    return est
