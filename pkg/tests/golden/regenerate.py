"""Rewrite the golden verdict files from the bundled scenarios (run on purpose only)."""

import json
from pathlib import Path

from forge.cli import SCENARIO_DIR, run_scenario
from forge.scenario import load_scenario

HERE = Path(__file__).parent

if __name__ == "__main__":
    for p in sorted(SCENARIO_DIR.glob("*.scn")):
        doc = run_scenario(load_scenario(p))
        payload = {"verdicts": doc.verdicts(), "exit_code": doc.exit_code}
        (HERE / f"{p.stem}.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        print(p.stem, doc.exit_code)
