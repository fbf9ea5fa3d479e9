#!/usr/bin/env python3
"""Regenerate frontend/tests/frozen.ts from the engine.

The UI test suite talks to a recording stub server instead of a live
service, so the stub needs real payloads to hand out. This script runs
the CLI against the shipped fixtures and captures the JSON answers into
a TypeScript module. Re-run it whenever the fixtures or the wire format
change, then re-run the frontend tests.
"""
from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
CONTEXT = "tests/fixtures/escooter_fp_context.imog.json"
SP = "tests/fixtures/sp_variants.imog.json"
OUT = ROOT / "frontend" / "tests" / "frozen.ts"

HEADER = '''\
// Payloads captured from the engine CLI over the shipped fixtures.
// Generated by scripts/freeze_ui_payloads.py; do not edit by hand.

import type { EffectiveBlock, Diagnostic, Propagation, TraceReport } from "../src/types.js";

export interface Resolution {
  block: EffectiveBlock;
  diagnostics: Diagnostic[];
}
'''


def cli(*args: str) -> dict:
    result = subprocess.run(
        [sys.executable, "-m", "imog.cli", *args, "--format", "json"],
        capture_output=True,
        text=True,
        check=True,
        cwd=ROOT,
    )
    return json.loads(result.stdout)


def ts_const(name: str, type_name: str, value: object) -> str:
    body = json.dumps(value, indent=2, sort_keys=True)
    return f"export const {name}: {type_name} = {body};\n"


def resolution_key(block: str, variants: dict, refinements: dict) -> str:
    # mirror of resolveKey in tests/stub.ts: JSON with sorted entry lists
    return json.dumps(
        [block, sorted(variants.items()), sorted(refinements.items())],
        separators=(",", ":"),
    )


def main() -> None:
    propagations = {
        "{}": cli("fp", "propagate", CONTEXT),
        '{"fp-simple":"In"}': cli("fp", "propagate", CONTEXT, "--in", "fp-simple"),
        '{"fp-driving":"Out"}': cli("fp", "propagate", CONTEXT, "--out", "fp-driving"),
    }
    count = cli("fp", "count", CONTEXT)["count"]
    report = cli("trace", "report", CONTEXT)
    resolutions = {
        resolution_key("spb-gen", {}, {}): cli("sp", "resolve", SP, "spb-gen"),
        resolution_key("spb-gen", {"spb-gen": "spv-marine"}, {}): cli(
            "sp", "resolve", SP, "spb-gen", "--variant", "spb-gen=spv-marine"
        ),
        resolution_key(
            "spb-gen", {"spb-gen": "spv-marine"}, {"rg-cooling": "rb-liquid"}
        ): cli(
            "sp",
            "resolve",
            SP,
            "spb-gen",
            "--variant",
            "spb-gen=spv-marine",
            "--refine",
            "rg-cooling=rb-liquid",
        ),
    }

    parts = [
        HEADER,
        ts_const("CONTEXT_PROPAGATIONS", "Record<string, Propagation>", propagations),
        ts_const("CONTEXT_COUNT", "number", count),
        ts_const("CONTEXT_REPORT", "TraceReport", report),
        ts_const("SP_RESOLUTIONS", "Record<string, Resolution>", resolutions),
    ]
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text("\n".join(parts))
    print(f"wrote {OUT.relative_to(ROOT)}")


if __name__ == "__main__":
    main()
