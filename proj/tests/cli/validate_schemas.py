"""Validate the sample inputs and a few reports against docs/schemas. Usage: validate_schemas.py ROOT DIRDEF"""
import json, os, subprocess, sys, pathlib
from jsonschema import Draft202012Validator
from referencing import Registry, Resource
root, B = pathlib.Path(sys.argv[1]), sys.argv[2]
os.chdir(root)
d = pathlib.Path("docs/schemas")
bad = 0
schemas = {p.name: json.loads(p.read_text()) for p in d.glob("*.json")}
reg = Registry().with_resources([(k, Resource.from_contents(v)) for k, v in schemas.items()])
def check(schema, inst, tag):
    errs = list(Draft202012Validator(schemas[schema], registry=reg).iter_errors(inst))
    global bad
    bad += bool(errs)
    print("ok " if not errs else "BAD", tag, *[e.message for e in errs][:2])
inp = pathlib.Path("docs/inputs")
for f in ["so3","broken","empty","heisenberg"]: check("structure.json", json.loads((inp/f"{f}.json").read_text()), f)
for f in ["standard3","double-so3","heisenberg-dual"]: check("courant.json", json.loads((inp/f"{f}.json").read_text()), f)
check("dirac.json", json.loads((inp/"lagrangian.json").read_text()), "lagrangian")
for f in ["oscillator","constrained"]: check("ihs-system.json", json.loads((inp/f"{f}.json").read_text()), f)
for args in [["check-jacobi","docs/inputs/so3.json"],["check-jacobi","docs/inputs/broken.json"],["deform-lie","docs/inputs/heisenberg.json"],
             ["deform-dirac","docs/inputs/heisenberg-dual.json"],["rothstein-check","--m","2","--k","2"],["dirac-linear","docs/inputs/lagrangian.json"],
             ["ihs-run","--system","docs/inputs/oscillator.json","--x0","1,0","--steps","5","--format","json"],
             ["check-jacobi","tests/cli/bad-index.json"]]:
    r = subprocess.run([B]+args, capture_output=True, text=True)
    try: check("report.json", json.loads(r.stdout), " ".join(args))
    except ValueError:
        bad += 1
        print("BAD", " ".join(args), "stdout is not JSON")
sys.exit(1 if bad else 0)
