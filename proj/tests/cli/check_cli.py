"""Drives the laughboard binary end to end and checks report.json against the schema."""
import json
import pathlib
import shutil
import subprocess
import sys

import jsonschema

binary, schema_path, source_demo, work = sys.argv[1:5]
work = pathlib.Path(work)
shutil.rmtree(work, ignore_errors=True)
work.mkdir(parents=True)
schema = json.loads(pathlib.Path(schema_path).read_text())
validator = jsonschema.Draft202012Validator(schema)
failures = []


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def run(*args):
    return subprocess.run([binary, *map(str, args)], capture_output=True, text=True, timeout=300)


for name in ("prompts.jsonl", "generations.jsonl"):
    shutil.copy(pathlib.Path(source_demo) / name, work / name)
config = json.loads((pathlib.Path(source_demo) / "oracle.json").read_text())
config["output_dir"] = "run"
config["rating"] = {"bootstrap_iterations": 30}
(work / "config.json").write_text(json.dumps(config))

r = run("run", "--config", work / "config.json")
check(r.returncode == 0, "run exits 0")
check("Rank" in r.stdout and "95% CI" in r.stdout and "Win Rate" in r.stdout, "run prints the leaderboard")
report_file = work / "run" / "report" / "report.json"
report = json.loads(report_file.read_text())
errors = list(validator.iter_errors(report))
check(not errors, "report.json validates against the schema")
check(report["manifest"]["records"] == 36, "exhaustive demo run holds 36 records")

first = report_file.read_bytes()
r = run("report", "--ledger", work / "run" / "ledger.jsonl", "--format", "json")
check(r.returncode == 0 and json.loads(r.stdout) == json.loads(first), "report command reproduces the run report")
r = run("report", "--ledger", work / "run" / "ledger.jsonl", "--format", "csv")
check(r.stdout.startswith("rank,model,bt_rating,ci_low,ci_high"), "csv leaderboard header")
r = run("rank", "--ledger", work / "run" / "ledger.jsonl")
check(r.returncode == 0 and r.stdout.splitlines()[0].split() == ["Rank", "Model", "BT", "Rating", "95%", "CI", "Win", "Rate"],
      "rank prints the text table")

broken = json.loads(first)
broken["statistics"]["tau"] = 3.0
check(any(True for _ in validator.iter_errors(broken)), "schema rejects tau outside [-1, 1]")
broken = json.loads(first)
del broken["manifest"]["prompt_template_sha256"]
check(any(True for _ in validator.iter_errors(broken)), "schema requires the prompt template hash")

# Budget 0: empty ledger, and report refuses.
r = run("run", "--config", work / "config.json", "--budget", "0", "--output", work / "empty")
check(r.returncode == 0 and (work / "empty" / "ledger.jsonl").stat().st_size == 0, "budget 0 leaves an empty ledger")
check(not (work / "empty" / "report").exists(), "budget 0 writes no report")
r = run("report", "--ledger", work / "empty" / "ledger.jsonl", "--format", "text")
check(r.returncode != 0 and "nothing to fit" in r.stderr, "report refuses an empty ledger")

# Two components: {a, b} and {c, d} never meet.
header = json.loads((work / "run" / "ledger.header.json").read_text())
split = work / "split"
split.mkdir()
(split / "ledger.header.json").write_text(json.dumps(header))
models = [m["model_id"] for m in header["models"]]
lines = []
for i, (a, b, s) in enumerate([(0, 1, 1.0), (0, 1, 0.0), (2, 3, 1.0), (2, 3, 0.5)], start=1):
    lines.append(json.dumps({
        "match_id": i, "prompt_id": "h001", "side_a_model": models[a], "side_b_model": models[b],
        "position_seed_applied": False,
        "verdict": {"decision": {1.0: "A", 0.0: "B", 0.5: "TIE"}[s], "reasoning": "", "winner_humor_features": [],
                    "winner_delivery_features": [], "loser_features": [], "confidence": None},
        "score_for_a": s, "judge_id": "hand", "timestamp": "", "elo_delta_a": 0.0, "tombstone": False, "voids": None}))
(split / "ledger.jsonl").write_text("\n".join(lines) + "\n")
r = run("report", "--ledger", split / "ledger.jsonl", "--format", "json")
split_report = json.loads(r.stdout)
check(r.returncode != 0 and split_report["fit_error"] and split_report["leaderboard"] is None,
      "disconnected ledger reports the fit error")
check(split_report["statistics"]["sigma_max"] is not None, "disconnected ledger still carries statistics")
check(not list(validator.iter_errors(split_report)), "disconnected report validates against the schema")

r = run("simulate", "--models", 4, "--prompts", 3, "--trials", 2, "--bootstrap", 10, "--json")
sim = json.loads(r.stdout)
check(r.returncode == 0 and sim["budget"] == 18 and len(sim["per_trial"]) == 2, "simulate runs and reports JSON")

r = run("run", "--config", work / "config.json", "--judge", "llm")
check(r.returncode == 2 and "endpoint" in r.stderr, "llm judge without an endpoint is refused")

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
