#!/usr/bin/env python3
"""Smoke test for the prefgraph_py extension module.

Builds the cdylib with cargo, loads it as an importable module, and checks a
few end-to-end behaviors: corpus analysis, filtering, purity verification,
prompt rendering, reply parsing, and the scalar metrics.
"""

import json
import math
import shutil
import subprocess
import sys
import sysconfig
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build_module(tmp: Path) -> None:
    subprocess.run(
        ["cargo", "build", "-p", "prefgraph-py", "--release"],
        cwd=ROOT,
        check=True,
    )
    ext = ".dylib" if sys.platform == "darwin" else ".so"
    built = ROOT / "target" / "release" / f"libprefgraph_py{ext}"
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    shutil.copy2(built, tmp / f"prefgraph_py{suffix}")
    sys.path.insert(0, str(tmp))


def directed(question, winner, loser):
    return [
        {"question_id": question, "first": winner, "second": loser, "verdict": "first"},
        {"question_id": question, "first": loser, "second": winner, "verdict": "second"},
    ]


def main() -> int:
    with tempfile.TemporaryDirectory() as tmp:
        build_module(Path(tmp))
        import prefgraph_py as pg

        # mixed corpus: one linear question, one 3-cycle
        corpus = (
            directed("q1", "A", "B")
            + directed("q1", "A", "C")
            + directed("q1", "B", "C")
            + directed("q2", "A", "B")
            + directed("q2", "B", "C")
            + directed("q2", "C", "A")
        )
        report = pg.analyze(json.dumps(corpus))
        assert math.isclose(report["rho"], 0.5), report
        assert math.isclose(report["tau_avg"], 0.5), report
        assert report["question_count"] == 2

        split = pg.filter(json.dumps(corpus))
        assert len(split["cleaned"]) == 6, "linear question survives intact"
        assert len(split["discarded"]) == 6, "the 3-cycle is fully discarded"
        assert math.isclose(split["report"]["retention"], 0.5)

        rho, tau = pg.verify_purity(json.dumps(split["cleaned"]))
        assert rho == 0.0 and tau == 0.0

        try:
            pg.verify_purity(json.dumps(corpus))
        except ValueError as err:
            assert "not pure" in str(err)
        else:
            raise AssertionError("impure corpus must raise")

        prompt = pg.render_prompt("cot", "Sort the list", "resp one", "resp two")
        assert prompt["user"].endswith('"Which is best, m or M?"')
        tie_prompt = pg.render_prompt("cot-tie", "Sort the list", "a", "b")
        assert tie_prompt["user"].endswith('"Which is best, m, M or D?"')

        assert pg.parse_judge_reply("explanation...\nM", "cot") == "second"
        assert pg.parse_judge_reply("too close to call: D", "cot-tie") == "tie"

        synthetic = pg.gen_corpus(4, 10, cycle_rate=0.0, tie_rate=0.0, seed=7)
        clean = pg.analyze(json.dumps(synthetic))
        assert clean["rho"] == 0.0 and clean["tau_avg"] == 0.0
        assert synthetic == pg.gen_corpus(4, 10, cycle_rate=0.0, tie_rate=0.0, seed=7)

        assert math.isclose(pg.adjusted_win_rate(5, 0, 5), 0.75)
        assert math.isclose(pg.spearman([1, 2, 3, 4, 5], [2, 1, 4, 3, 5]), 0.8)
        assert pg.self_bleu("same words here", "same words here") == 1.0

    print("smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
