# Driving the scenario runner the same way the eitcav command does.
#
# Run with:  python3 demos/05_command_line.py
# The equivalent shell commands are
#   eitcav steady --set Y=0.95 --out-dir out
#   eitcav preset fig5-top --out-dir out
#   eitcav verify

# %%
import json
import tempfile
from pathlib import Path

from eitcav.cli import main
from eitcav.scenario import PRESETS

print("presets:", ", ".join(PRESETS))

# %%
out = Path(tempfile.mkdtemp())
code = main(["steady", "--set", "Y=0.95", "--out-dir", str(out)])
print("exit code", code)
print((out / "steady.csv").read_text())

# %%
manifest = json.loads((out / "steady.manifest.json").read_text())
print(json.dumps(manifest["solver"], indent=2))

# %%
# Compare the numerical path against the closed forms; exit code 0 means all agree.
print("verify exit code", main(["verify", "--out-dir", str(out)]))
