import os

import numpy as np
import pytest

from edgesync import (
    DisconnectedGraphError,
    ParseError,
    parse_scenario,
    parse_scenario_text,
    realize,
)

SCENARIO_DIR = os.path.join(os.path.dirname(__file__), "..", "scenarios")

MINIMAL = """
[graph]
nodes 2
edge 1 2 1.0

[model]
kind linear
a 0 1 ; 0 0
b 0 1

[certificate]
rho 1.0
mu 0.2

[controller]
beta_multiplier 1.0

[initial]
base 0 0
radius 5.0
seed 11

[integration]
h 0.005
t_end 1.0
record_interval 0.05
"""


def replace_section(text, header, body):
    """Swap the body of one [section] in the minimal scenario text."""
    lines = text.splitlines()
    out = []
    skipping = False
    for line in lines:
        if line.strip() == f"[{header}]":
            skipping = True
            out.append(line)
            out.extend(body.splitlines())
            continue
        if skipping:
            if line.strip().startswith("["):
                skipping = False
                out.append(line)
            continue
        out.append(line)
    return "\n".join(out)


class TestShippedScenarios:
    def test_linear_c3(self):
        sc = parse_scenario(os.path.join(SCENARIO_DIR, "linear_c3.scn"))
        assert sc.model_kind == "linear"
        assert sc.beta_multiplier == 1.0
        assert sc.rho == 1.0 and sc.mu == 0.2
        setup = realize(sc)
        assert setup.graph.n == 3 and setup.graph.q == 3
        assert setup.controller.beta_star == pytest.approx(1.0 / 6.0)
        assert setup.x0.shape == (6,)

    def test_tanh_p3(self):
        sc = parse_scenario(os.path.join(SCENARIO_DIR, "tanh_p3.scn"))
        assert sc.model_kind == "tanh"
        assert sc.model_scalars["gamma"] == 0.05
        setup = realize(sc)
        assert setup.model.name == "tanh_perturbed"
        assert setup.controller.beta_star == pytest.approx(0.5)
        assert not setup.approximate

    def test_lorenz15(self):
        sc = parse_scenario(os.path.join(SCENARIO_DIR, "lorenz15.scn"))
        setup = realize(sc)
        assert setup.graph.n == 15 and setup.graph.q == 18
        assert setup.model.name == "lorenz"
        assert setup.approximate
        assert setup.controller.beta == 30.0
        assert setup.controller.below_critical
        weights = [w for _, _, w in setup.graph.edges]
        assert sorted(weights)[:2] == [0.1, 0.1]
        assert max(weights) == 6.0


class TestParseValidation:
    def test_minimal_parses(self):
        sc = parse_scenario_text(MINIMAL)
        assert sc.graph_inline.n == 2
        assert sc.init_seed == 11

    def test_missing_section(self):
        bad = MINIMAL.replace("[certificate]\nrho 1.0\nmu 0.2\n", "")
        with pytest.raises(ParseError) as exc:
            parse_scenario_text(bad)
        assert "certificate" in str(exc.value)

    def test_unknown_section(self):
        with pytest.raises(ParseError):
            parse_scenario_text(MINIMAL + "\n[extras]\nfoo 1\n")

    def test_unknown_key_carries_line(self):
        bad = MINIMAL.replace("radius 5.0", "radius 5.0\nwobble 3")
        with pytest.raises(ParseError) as exc:
            parse_scenario_text(bad, path="case.scn")
        assert "case.scn:" in str(exc.value)
        assert "wobble" in str(exc.value)

    def test_bad_number(self):
        with pytest.raises(ParseError):
            parse_scenario_text(MINIMAL.replace("rho 1.0", "rho one"))

    def test_both_graph_sources(self):
        bad = MINIMAL.replace("[graph]", "[graph]\nfile g.graph")
        with pytest.raises(ParseError):
            parse_scenario_text(bad)

    def test_both_beta_specs(self):
        bad = MINIMAL.replace("beta_multiplier 1.0",
                              "beta_multiplier 1.0\nbeta 2.0")
        with pytest.raises(ParseError):
            parse_scenario_text(bad)

    def test_no_beta_spec(self):
        bad = replace_section(MINIMAL, "controller", "")
        with pytest.raises(ParseError):
            parse_scenario_text(bad)

    def test_explicit_states_must_cover_all(self):
        body = "state 1 0.0 0.0\nstate 3 1.0 1.0"
        with pytest.raises(ParseError):
            parse_scenario_text(replace_section(MINIMAL, "initial", body))

    def test_states_exclusive_with_base(self):
        body = "state 1 0.0 0.0\nstate 2 1.0 1.0\nbase 0 0\nradius 1.0\nseed 4"
        with pytest.raises(ParseError):
            parse_scenario_text(replace_section(MINIMAL, "initial", body))

    def test_nonpositive_integration(self):
        with pytest.raises(ParseError):
            parse_scenario_text(MINIMAL.replace("h 0.005", "h 0"))

    def test_unknown_model_kind(self):
        with pytest.raises(ParseError):
            parse_scenario_text(MINIMAL.replace("kind linear", "kind vortex"))

    def test_ragged_matrix(self):
        with pytest.raises(ParseError):
            parse_scenario_text(MINIMAL.replace("a 0 1 ; 0 0", "a 0 1 ; 0"))


class TestRealize:
    def test_explicit_states(self):
        body = "state 1 0.5 0.0\nstate 2 -0.5 1.0"
        sc = parse_scenario_text(replace_section(MINIMAL, "initial", body))
        setup = realize(sc)
        assert np.array_equal(setup.x0, [0.5, 0.0, -0.5, 1.0])
        assert setup.seed == -1

    def test_state_dimension_checked(self):
        body = "state 1 0.5\nstate 2 -0.5"
        sc = parse_scenario_text(replace_section(MINIMAL, "initial", body))
        with pytest.raises(ParseError):
            realize(sc)

    def test_inline_metric(self):
        text = MINIMAL.replace("mu 0.2", "mu 0.2\np 3 1 ; 1 2")
        sc = parse_scenario_text(text)
        setup = realize(sc)
        assert np.array_equal(setup.certificate.p, [[3.0, 1.0], [1.0, 2.0]])
        # gain = b^T P row
        xs = np.array([[1.0, 0.0]])
        assert setup.model.alpha_all(xs)[0] == pytest.approx(1.0)

    def test_disconnected_rejected_for_runs(self):
        text = replace_section(
            MINIMAL, "graph",
            "nodes 4\nedge 1 2 1.0\nedge 3 4 1.0")
        sc = parse_scenario_text(text)
        with pytest.raises(DisconnectedGraphError):
            realize(sc)
        setup = realize(sc, require_connected=False)
        assert setup.spectral.components == 2

    def test_graph_file_relative_to_scenario(self, tmp_path):
        (tmp_path / "toy.graph").write_text("nodes 2\n1 2 1.0\n")
        text = replace_section(MINIMAL, "graph", "file toy.graph")
        scn = tmp_path / "toy.scn"
        scn.write_text(text)
        setup = realize(parse_scenario(str(scn)))
        assert setup.graph.n == 2

    def test_lorenz_defaults(self):
        text = replace_section(MINIMAL, "model", "kind lorenz")
        text = replace_section(text, "certificate", "rho 10.0\nmu 0.5")
        text = replace_section(text, "initial",
                               "base 0 0 0\nradius 1.0\nseed 1")
        sc = parse_scenario_text(text)
        assert sc.model_scalars == {}
        setup = realize(sc)
        assert setup.model.params["a"] == 10.0
        assert setup.model.params["b"] == pytest.approx(8.0 / 3.0)
        assert setup.model.params["c"] == 28.0
        assert setup.approximate
