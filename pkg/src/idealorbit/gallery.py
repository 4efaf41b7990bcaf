"""The bundled fixture gallery and its golden reports."""
from __future__ import annotations

import json
from importlib import resources

from .jobs import Job

# fixture name -> commands whose reports are frozen as golden files
GALLERY = {
    "five_variable_radical": ("orbit scan",),
    "swap_truncated": ("orbit scan",),
    "laurent_nilpotent": ("orbit scan", "orbit certify"),
    "frobenius_powers_p2": ("orbit scan",),
    "frobenius_powers_p3": ("orbit scan",),
    "frobenius_powers_p5": ("orbit scan",),
    "rotation_linear": ("orbit scan", "orbit certify"),
    "identity_trivial": ("orbit scan", "orbit certify"),
    "translation": ("orbit scan", "orbit certify"),
    "nilpotent_sign_twist": ("orbit scan", "orbit certify"),
    "arc_translate": ("arc build",),
    "arc_scale": ("arc build",),
    "relations_counterexample": ("relations check",),
    "strassman_linear": ("strassman",),
    "strassman_geometric": ("strassman",),
    "groebner_twisted_cubic": ("groebner",),
}


def _root():
    return resources.files(__package__) / "fixtures"


def fixture_path(name):
    return _root() / f"{name}.json"


def load_fixture(name) -> dict:
    return json.loads(fixture_path(name).read_text(encoding="utf-8"))


def load_job(name) -> Job:
    return Job.from_dict(load_fixture(name))


def golden_name(name, command):
    return f"{name}.{command.replace(' ', '_')}.json"


def golden_path(name, command):
    return _root() / "golden" / golden_name(name, command)


def load_golden(name, command) -> dict:
    return json.loads(golden_path(name, command).read_text(encoding="utf-8"))


def regenerate():
    """Rewrite every golden report from the current code."""
    from .cli import run
    from .jobs import canonical_json

    written = []
    for name, commands in GALLERY.items():
        for command in commands:
            report, _ = run(command, load_job(name))
            path = golden_path(name, command)
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(json.dumps(json.loads(canonical_json(report)), indent=2, sort_keys=True, ensure_ascii=False))
                fh.write("\n")
            written.append(str(path))
    return written


if __name__ == "__main__":
    for path in regenerate():
        print(path)
