"""Checks the CLI exit-code contract on small inputs."""
import os
import pathlib
import subprocess
import sys
import tempfile

cli, cases_dir = sys.argv[1], pathlib.Path(sys.argv[2])
tmp = pathlib.Path(tempfile.mkdtemp())
bad = tmp / "bad.ode"
bad.write_text("x'(t) = -(a01 + ) * x(t)\ny(t) = x(t)\n")
blow = tmp / "blow.ode"
blow.write_text("x'(t) = x(t)^2\ny(t) = x(t)\n")
sir = str(cases_dir / "sir.ode")
bilinear = str(cases_dir / "bilinear.ode")

runs = [
    ("ok", [cli, "analyze", sir], {}, 0),
    ("missing file", [cli, "analyze", str(tmp / "missing.ode")], {}, 2),
    ("parse error", [cli, "analyze", str(bad)], {}, 2),
    ("bad function", [cli, "funcs", bilinear, "--check", "p+"], {}, 2),
    ("unbound symbol", [cli, "simulate", bilinear, "--params", "p=1", "--ic", "x=1", "--tspan", "0:1"], {}, 2),
    ("unknown flag", [cli, "analyze", sir, "--frobnicate"], {}, 2),
    ("global timeout", [cli, "analyze", sir, "--level", "global"], {"STRUCTID_TIMEOUT": "0"}, 4),
    ("flag beats environment", [cli, "analyze", sir, "--level", "global", "--timeout", "60"],
     {"STRUCTID_TIMEOUT": "0"}, 0),
    ("blow-up", [cli, "simulate", str(blow), "--ic", "x=1", "--tspan", "0:2"], {}, 3),
    ("local cases", [cli, "cases", "--level", "local"], {}, 1),
]

failures = 0
for name, cmd, env, want in runs:
    out = subprocess.run(cmd, capture_output=True, text=True, env={**os.environ, **env})
    ok = out.returncode == want
    failures += not ok
    print(f"{'ok  ' if ok else 'FAIL'} {name}: exit {out.returncode} (want {want})")
    if not ok:
        print(out.stderr.strip())
sys.exit(1 if failures else 0)
