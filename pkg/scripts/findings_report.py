"""Print the three documented discrepancies next to the computed values."""
import json
import math

from besselweyl import cli
from besselweyl.weyl import density_closed_form, nevanlinna_reconstruct, stated_density


def main():
    for nu in (0.2, 0.4, 0.6):
        t = 2.0
        print(f"density nu={nu} t={t}: computed {density_closed_form(nu, t):.10f}  "
              f"stated {stated_density(nu, t):.10f}  ratio {stated_density(nu, t) / density_closed_form(nu, t):.6f}")
    fit = nevanlinna_reconstruct(0.0, 1j)
    print(f"A_0: fitted {fit.fitted_constant:.12f}  stated {fit.stated_constant:.12f}  "
          f"difference {fit.discrepancy:.12f} (pi/4 = {math.pi / 4:.12f})")
    _, _, report = cli.run(cli.RunConfig("verify").validate())
    for f in report.findings:
        print(json.dumps(cli._json_safe(f)))


if __name__ == "__main__":
    main()
