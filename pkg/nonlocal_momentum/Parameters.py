import json
import sys

from nonlocal_momentum.Quadrature import QuadratureRule, QuadratureSpec


class Parameters:
    required_params = []

    # Quadrature
    quadrature_rule = "gauss-legendre"
    quadrature_panels = 64
    quadrature_points = 8

    # Tolerances
    root_tol = 1e-12
    rank_tol = 1e-8
    degeneracy_tol = 1e-13
    pole_tol = 1e-12
    condition_tol = 1e-10
    resonance_tol = 1e-12
    tail_tol = 1e-10

    truncation_radius = 40.0  # e^{-R} below double precision noise
    bracket_subdivisions = 8
    root_max_iterations = 200
    axis_scan_step = 1e-3

    # Discretisation oracle
    oracle_n = 4096
    oracle_axis_n = 6000
    oracle_axis_length = 30.0
    oracle_dense_limit = 1200
    localisation_fraction = 0.99

    tolerance_names = {
        "root": "root_tol",
        "rank": "rank_tol",
        "condition": "condition_tol",
        "degeneracy": "degeneracy_tol",
        "pole": "pole_tol",
        "resonance": "resonance_tol",
    }

    def __init__(self, params=None, validate=True):
        if params is None:
            params = {}
        if validate:
            if not self.is_valid(params):
                sys.exit(2)

        self.load_from_dict(params)

        self._original_params = params

    @classmethod
    def load(cls, fname, validate=True):
        with open(fname) as fp:
            return cls(json.load(fp), validate=validate)

    def load_from_dict(self, params):
        for key in params:
            setattr(self, key, params[key])
        self.set_derived_params(params)

    def is_valid(self, params):
        valid = True
        for key in self.required_params:
            if key not in params:
                print(key, "missing from input parameters.")
                valid = False
        for key in params:
            if not hasattr(Parameters, key):
                print(key, "is not a known parameter.")
                valid = False
        rule = params.get("quadrature_rule", self.quadrature_rule)
        if rule not in QuadratureRule.names():
            print(f"Unknown quadrature rule {rule}.")
            valid = False
        for key in ["quadrature_panels", "quadrature_points", "oracle_n"]:
            if int(params.get(key, getattr(self, key))) < 1:
                print(key, "must be a positive integer.")
                valid = False
        for key in self.tolerance_names.values():
            if float(params.get(key, getattr(self, key))) <= 0.0:
                print(key, "must be positive.")
                valid = False
        return int(valid)

    def set_derived_params(self, params):
        self.quadrature = QuadratureSpec(
            QuadratureRule.from_name(self.quadrature_rule),
            int(self.quadrature_panels),
            int(self.quadrature_points),
        )

    def override_tolerance(self, name, value):
        """Applies a ``--tol name=value`` override"""
        if name not in self.tolerance_names:
            raise KeyError(name)
        setattr(self, self.tolerance_names[name], float(value))

    def tolerances(self):
        tols = {
            name: getattr(self, attr)
            for name, attr in self.tolerance_names.items()
        }
        tols["quadrature"] = str(self.quadrature)
        return tols

    def as_dict(self):
        keys = [
            key
            for key in dir(Parameters)
            if not key.startswith("_")
            and not callable(getattr(Parameters, key))
            and key not in ("required_params", "tolerance_names")
        ]
        return {key: getattr(self, key) for key in sorted(keys)}

    def save(self, fname="params.json"):
        with open(fname, "w") as fp:
            json.dump(self.as_dict(), fp, indent=2)
