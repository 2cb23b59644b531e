"""Drive the command-line interface end to end via subprocess.

Every subcommand emits JSON (or CSV for sweeps) on stdout, so results pipe
cleanly into jq or pandas. Fractions like 4/25 are accepted anywhere a
probability is expected.
"""

import json
import subprocess


def run(*args):
    out = subprocess.run(
        ["ringgames", *args], capture_output=True, text=True, check=True,
    )
    return out.stdout


print("$ ringgames mean --fixture capital-C --variance")
print(run("mean", "--fixture", "capital-C", "--variance"))

print("$ ringgames mean --family xie --N 6 --p 1,4/25,4/25,7/10 --mix 1/2")
payload = json.loads(run(
    "mean", "--family", "xie", "--N", "6",
    "--p", "1,4/25,4/25,7/10", "--mix", "1/2",
))
print(json.dumps(payload, indent=2)[:400], "...")

print()
print("$ ringgames table --family xie --Ns 3,6,9 --p 1,4/25,4/25,7/10  (means only)")
table = json.loads(run(
    "table", "--family", "xie", "--Ns", "3,6,9", "--p", "1,4/25,4/25,7/10",
))
for row in table["result"]["rows"]:
    print(" ", row["N"], row["values_6sig"])

print()
print("$ ringgames sweep --N 4 --grid-step 0.5 --mix 1/2 --output csv")
print(run("sweep", "--N", "4", "--grid-step", "0.5", "--mix", "1/2",
          "--output", "csv"))

print("$ ringgames volume --gamma 1/2 --dims 3 --samples 100000")
print(run("volume", "--gamma", "1/2", "--dims", "3", "--samples", "100000"))

print("$ ringgames simulate --family xie --N 3 --p 1,4/25,4/25,7/10 --pure B"
      " --turns 100000 --seed 1")
print(run("simulate", "--family", "xie", "--N", "3", "--p", "1,4/25,4/25,7/10",
          "--pure", "B", "--turns", "100000", "--seed", "1"))

print("$ ringgames reduce-info --N 4 --group dihedral")
print(run("reduce-info", "--N", "4", "--group", "dihedral"))
