import io
import json

from surfaut.cli import run


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


class TestIsZieschang:
    def test_relator_true(self):
        code, out, _ = invoke(["is-zieschang", "--sig", "1,0", "--word", "x1' y1' x1 y1"])
        assert code == 0 and out.strip() == "true"

    def test_cycle_false(self):
        code, out, _ = invoke(
            ["is-zieschang", "--sig", "1,1", "--word", "x1 y1 t1 y1' x1'"]
        )
        assert code == 1 and out.strip() == "false"

    def test_bad_word_is_usage_error(self):
        code, _, err = invoke(["is-zieschang", "--sig", "1,0", "--word", "q9"])
        assert code == 2 and "error" in err


class TestEval:
    def test_display_identity(self):
        code, out, _ = invoke(
            ["eval", "--sig", "3,0", "--genword", "b1 a1", "--apply", "x1' y1' x1"]
        )
        assert code == 0 and out.strip() == "x1'"

    def test_prints_automorphism(self):
        code, out, _ = invoke(["eval", "--sig", "1,0", "--genword", "a1"])
        assert code == 0 and "x1 -> y1' x1" in out

    def test_bad_generator_for_signature(self):
        code, _, _ = invoke(["eval", "--sig", "1,0", "--genword", "s2"])
        assert code == 2


class TestVerify:
    def test_member(self):
        code, out, _ = invoke(
            ["verify", "--sig", "1,0", "--aut", "x1 -> y1' x1"]
        )
        assert code == 0 and "in_A: true" in out

    def test_non_member(self):
        code, out, _ = invoke(["verify", "--sig", "1,0", "--aut", "x1 -> x1 y1"])
        assert code == 1 and "fixes_relator: false" in out

    def test_json_fields(self):
        code, out, _ = invoke(
            ["--json", "verify", "--sig", "1,0", "--aut", "x1 -> y1' x1"]
        )
        payload = json.loads(out)
        assert payload["command"] == "verify"
        assert payload["in_A"] is True and payload["permutes_t_classes"] == []


class TestCanonAndReduce:
    def test_canon(self):
        code, out, _ = invoke(
            ["canon", "--sig", "1,1", "--word", "t1 x1 y1 x1' y1'"]
        )
        assert code == 0
        assert "(iv k=1)" in out and "(vi k=1)" in out

    def test_canon_rejects_non_zieschang(self):
        code, _, err = invoke(["canon", "--sig", "1,1", "--word", "x1 y1 t1 y1' x1'"])
        assert code == 1 and "NotZieschang" in err

    def test_nielsen_reduce(self):
        code, out, _ = invoke(
            ["nielsen-reduce", "--sig", "1,0", "--aut", "x1 -> y1' x1"]
        )
        assert code == 0 and "N2_right k=1" in out and "(N1)" in out


class TestCertifyFactorize:
    def test_certify(self):
        code, out, _ = invoke(["certify", "--sig", "1,0", "--aut", "y1 -> x1 y1"])
        assert code == 0 and "y1 -> x1' y1" in out

    def test_certify_rejects(self):
        code, _, err = invoke(["certify", "--sig", "1,0", "--aut", "x1 -> x1 y1"])
        assert code == 1 and "HypothesisViolated" in err

    def test_factorize(self, tmp_path):
        path = tmp_path / "sigma2.txt"
        path.write_text("sig g=0 p=2\nt2 -> t1\nt1 -> t1' t2 t1\n", encoding="utf-8")
        code, out, _ = invoke(["factorize", "--sig", "0,2", "--aut", str(path)])
        assert code == 0
        code2, out2, _ = invoke(
            ["eval", "--sig", "0,2", "--genword", out.strip(), "--apply", "t2"]
        )
        assert code2 == 0 and out2.strip() == "t1"

    def test_factorize_adlh(self):
        # alpha_3 written only with ADLH names
        code, out, _ = invoke(
            ["factorize", "--sig", "3,0", "--adlh", "--aut", "x3 -> y3' x3"]
        )
        assert code == 0
        assert "a3" not in out.split()

    def test_deterministic(self):
        args = ["factorize", "--sig", "1,1", "--aut", "x1 -> y1' x1; y1 -> x1 y1"]
        assert invoke(args) == invoke(args)


class TestWhitehead:
    def test_dot_to_stdout(self):
        code, out, _ = invoke(["whitehead", "--sig", "1,0", "--word", "x1' y1' x1 y1"])
        assert code == 0 and out.startswith("digraph whitehead")

    def test_dot_to_file(self, tmp_path):
        target = tmp_path / "graph.dot"
        code, out, _ = invoke(
            ["whitehead", "--sig", "0,2", "--word", "t2 t1", "--dot", str(target)]
        )
        assert code == 0 and target.exists()
        assert "digraph" in target.read_text(encoding="utf-8")


class TestOuterEqual:
    def test_equal_to_self(self):
        code, out, _ = invoke(
            ["outer-equal", "--sig", "1,0", "--aut", "y1 -> x1 y1", "--other", "y1 -> x1 y1"]
        )
        assert code == 0 and out.strip() == "1"

    def test_not_outer_equal(self):
        code, out, _ = invoke(
            ["outer-equal", "--sig", "1,0", "--aut", "x1 -> x1", "--other", "y1 -> x1 y1"]
        )
        assert code == 1 and out.strip() == "none"


class TestSelftest:
    def test_tiny_run(self):
        code, out, _ = invoke(
            ["selftest", "--samples", "2", "--seed", "7", "--criteria", "4,6,9"]
        )
        assert code == 0
        lines = [ln for ln in out.splitlines() if ln]
        assert len(lines) == 3 and all(ln.startswith("PASS") for ln in lines)

    def test_json_output(self):
        code, out, _ = invoke(
            ["--json", "selftest", "--samples", "1", "--seed", "7", "--criteria", "9"]
        )
        payload = json.loads(out)
        assert payload["command"] == "selftest"
        assert payload["results"][0]["ok"] is True

    def test_bad_criterion_index(self):
        code, _, err = invoke(["selftest", "--criteria", "42"])
        assert code == 2
