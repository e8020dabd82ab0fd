"""End-to-end checks of the mvlabel executable: exit codes, artifacts, determinism."""

import json
import shutil
import subprocess
import sys
import tempfile
import xml.etree.ElementTree as ET
from pathlib import Path

EXE = sys.argv[1]
failures = []


def run(*args):
    return subprocess.run([EXE, *args], capture_output=True, text=True)


def expect(ok, what):
    print(("ok   " if ok else "FAIL ") + what)
    if not ok:
        failures.append(what)


def write_config(path, **extra):
    cfg = {"dataset": "synth.csv", "registry": "synth.registry.json", "seed": 42}
    cfg.update(extra)
    path.write_text(json.dumps(cfg))
    return path


with tempfile.TemporaryDirectory(prefix="mvlabel-cli-") as tmp:
    tmp = Path(tmp)
    r = run("synth", "--out", str(tmp / "synth.csv"), "--seed", "42")
    expect(r.returncode == 0, "synth exits 0")
    expect((tmp / "synth.registry.json").is_file(), "synth writes the registry")
    expect((tmp / "synth.planted.json").is_file(), "synth writes planted labels")

    cfg = write_config(tmp / "config.json")
    r = run("run", "--config", str(cfg), "--out", str(tmp / "a"))
    expect(r.returncode == 0, f"run exits 0 (stderr: {r.stderr.strip()[:200]})")
    charts = sorted((tmp / "a" / "charts").glob("*.svg"))
    expect(len(charts) == 6, f"six SVG charts ({len(charts)})")
    for svg in charts:
        try:
            root = ET.parse(svg).getroot()
            expect(root.tag.endswith("svg"), f"{svg.name} is an SVG document")
        except ET.ParseError as e:
            expect(False, f"{svg.name} parses as XML ({e})")
    csv_lines = (tmp / "a" / "significance.csv").read_text().splitlines()
    expect(csv_lines[0].startswith("view,score,cluster1"), "CSV header")
    expect(len(csv_lines) == 25, f"24 significance rows ({len(csv_lines) - 1})")

    r = run("run", "--config", str(cfg), "--out", str(tmp / "b"), "-v")
    expect(r.returncode == 0, "second run exits 0")
    expect("cluster" in r.stderr, "verbose run logs stages")
    for f in ("report.md", "significance.csv", "labels.json"):
        expect((tmp / "a" / f).read_bytes() == (tmp / "b" / f).read_bytes(), f"{f} is deterministic")

    # Stages one at a time, re-labelling without refitting.
    stepwise = tmp / "c"
    for stage in ("ingest", "cluster", "label", "validate", "report"):
        r = run(stage, "--config", str(cfg), "--out", str(stepwise))
        expect(r.returncode == 0, f"{stage} stage exits 0")
    expect((stepwise / "report.md").read_bytes() == (tmp / "a" / "report.md").read_bytes(),
           "stepwise report matches the full run")

    r = run("validate", "--config", str(cfg), "--out", str(tmp / "empty"))
    expect(r.returncode == 1, f"validate without models exits 1 ({r.returncode})")
    r = run("run", "--config", str(write_config(tmp / "bad.json", k_range=[1, 15])))
    expect(r.returncode == 1, f"invalid k_range exits 1 ({r.returncode})")
    r = run("run", "--config", str(write_config(tmp / "nodata.json", dataset="missing.csv")),
            "--out", str(tmp / "d"))
    expect(r.returncode == 1, f"missing dataset exits 1 ({r.returncode})")
    r = run("run", "--config", str(cfg), "--llm-mode", "fixture", "--out", str(tmp / "e"))
    expect(r.returncode == 1, f"fixture mode without a directory exits 1 ({r.returncode})")
    r = run("run", "--config", str(write_config(tmp / "rows.json", min_rows=100000)),
            "--out", str(tmp / "f"))
    expect(r.returncode == 2, f"too few rows exits 2 ({r.returncode})")
    expect("cluster" in r.stderr and "position" in r.stderr, "error names the stage and view")
    r = run("bogus")
    expect(r.returncode == 1, f"unknown subcommand exits 1 ({r.returncode})")
    r = run("--help")
    expect(r.returncode == 0, "help exits 0")

sys.exit(1 if failures else 0)
