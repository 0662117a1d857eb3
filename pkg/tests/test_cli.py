import os
import subprocess
import sys
from pathlib import Path

import pytest

from polar_rewrite.cli import main
from polar_rewrite.rewriting import rewrite_step
from polar_rewrite.search import are_isomorphic
from polar_rewrite.textfmt import parse_document

from _support import corpus, corpus_path

GOLDEN = Path(__file__).parent / "golden"

# name -> argv; outputs are frozen under tests/golden (regenerate with POLAR_REWRITE_REGEN=1)
COMMANDS = {
    "apply_intro": ["apply", "intro.pgr", "--rule", "intro", "--target", "G", "--match", "m"],
    "apply_intro_full": ["apply", "intro.pgr", "--rule", "intro", "--target", "G", "--match", "m", "--emit-intermediates"],
    "apply_first": ["apply", "first_example.pgr", "--rule", "first", "--target", "G", "--match", "m"],
    "apply_spam": ["apply", "spam.pgr", "--rule", "spam", "--target", "G"],
    "apply_global": ["apply", "global_update.pgr", "--rule", "update", "--target", "G", "--match", "m"],
    "derive_memory": ["derive", "memory.pgr", "--target", "G", "--rules", "free,halt"],
    "derive_map": ["derive", "map.pgr", "--target", "G", "--rules", "init,step", "--gc-root", "j"],
    "encode_sqpo": ["encode-sqpo", "pushbacks.pgr"],
    "encode_hpo": ["encode-hpo", "intro.pgr"],
    "dot_first": ["export-dot", "first_example.pgr", "--name", "G"],
}


def _argv(args):
    return [str(corpus_path(a)) if a.endswith(".pgr") else a for a in args]


def run(capsys, *args):
    code = main(_argv(list(args)))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", sorted(COMMANDS))
def test_golden_outputs(capsys, name):
    code, out, _ = run(capsys, *COMMANDS[name])
    assert code == 0
    path = GOLDEN / f"{name}.txt"
    if os.environ.get("POLAR_REWRITE_REGEN"):
        GOLDEN.mkdir(exist_ok=True)
        path.write_text(out, encoding="utf-8")
    assert out == path.read_text(encoding="utf-8")


@pytest.mark.parametrize("name", ["intro.pgr", "memory.pgr", "spam.pgr", "global_update.pgr", "map.pgr", "pushbacks.pgr"])
def test_validate_corpus(capsys, name):
    code, out, _ = run(capsys, "validate", name)
    assert code == 0 and out.rstrip().splitlines()[-1].startswith("ok:")


def test_validate_reports_invalid_rule(tmp_path, capsys):
    bad = tmp_path / "bad.pgr"
    bad.write_text(
        "graph L { node a [pol=-]; }\ngraph K { node k [pol=+]; }\n"
        "rule p { lhs L; interface K; rhs K; l { k -> a; } r { k -> k; } }\n"
    )
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 1 and "p" in err


def test_match_lists_all(capsys):
    code, out, _ = run(capsys, "match", "intro.pgr", "--rule", "intro", "--target", "G")
    assert code == 0 and out.startswith("# 5 match(es)")
    # the listed morphisms refer to graphs of the input file
    with open(corpus_path("intro.pgr"), encoding="utf-8") as fh:
        src = fh.read()
    doc = parse_document(src.replace("morphism m ", "morphism given ") + out)
    assert len([n for n in doc.morphisms if n != "given"]) == 5


def test_apply_output_reparses(capsys):
    code, out, _ = run(capsys, *COMMANDS["apply_intro_full"])
    doc = parse_document(out)
    assert set(doc.graphs) == {"H", "G_pol", "D_pol", "D"}
    doc0 = corpus("intro.pgr")
    step = rewrite_step(doc0.rule("intro"), doc0.morphisms["m"].morphism)
    assert doc.graph("H") == step.H
    assert are_isomorphic(doc.graph("D"), step.D) is not None


def test_apply_by_index(capsys):
    code, out, _ = run(capsys, "apply", "intro.pgr", "--rule", "intro", "--target", "G", "--match", "0")
    assert code == 0 and "graph H" in out
    code, _, err = run(capsys, "apply", "intro.pgr", "--rule", "intro", "--target", "G", "--match", "99")
    assert code == 1 and "99" in err
    code, _, err = run(capsys, "apply", "intro.pgr", "--rule", "intro", "--target", "G", "--match", "zz")
    assert code == 1


def test_encoded_rules_reparse_and_validate(capsys):
    for cmd in ("encode-sqpo", "encode-hpo"):
        src = "pushbacks.pgr" if cmd == "encode-sqpo" else "intro.pgr"
        code, out, _ = run(capsys, cmd, src)
        assert code == 0
        doc = parse_document(out)
        assert doc.rules
        for name in doc.rules:
            doc.rule(name)


def test_check_square(capsys):
    code, out, _ = run(capsys, "check-square", "pushbacks.pgr", "--kind", "pushback", "--morphisms", "gra_l,gra_m")
    assert code == 0 and out.startswith("pushback: D has 4 nodes, 7 edges") and out.rstrip().endswith("ok")
    code, out, _ = run(
        capsys, "check-square", "pushbacks.pgr", "--kind", "pushback", "--polarized",
        "--morphisms", "pol_l,pol_m", "--bound", "2",
    )
    assert code == 0 and "D has 4 nodes, 4 edges" in out
    code, out, _ = run(capsys, "check-square", "pushbacks.pgr", "--kind", "pullback", "--morphisms", "gra_m,gra_m")
    assert code == 0 and "K has 2 nodes, 1 edges" in out


def test_check_square_unknown_morphism(capsys):
    code, _, err = run(capsys, "check-square", "pushbacks.pgr", "--kind", "pushout", "--morphisms", "gra_l,zz")
    assert code == 1 and "error" in err


def test_domain_errors_exit_one(capsys, tmp_path):
    assert run(capsys, "apply", "intro.pgr", "--rule", "nope", "--target", "G")[0] == 1
    assert run(capsys, "validate", str(tmp_path / "missing.pgr"))[0] == 1
    broken = tmp_path / "broken.pgr"
    broken.write_text("graph X { node a; edge e a -> a; }")
    assert run(capsys, "validate", str(broken))[0] == 1


def test_derive_step_limit_exits_one(capsys):
    assert run(capsys, "derive", "memory.pgr", "--target", "G", "--rules", "free", "--max-steps", "1")[0] == 1


@pytest.mark.parametrize(
    "argv",
    [[], ["bogus"], ["apply", "x.pgr"], ["check-square", "x.pgr", "--kind", "colimit"], ["derive", "x", "--target", "G", "--rules", "r", "--max-steps", "-1"]],
)
def test_usage_errors_exit_two(argv, capsys):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_output_independent_of_hash_seed():
    outs = set()
    for seed in ("0", "1", "12345"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        res = subprocess.run(
            [sys.executable, "-m", "polar_rewrite.cli", *_argv(COMMANDS["derive_map"])],
            capture_output=True, text=True, env=env, check=True,
        )
        outs.add(res.stdout)
    assert len(outs) == 1
