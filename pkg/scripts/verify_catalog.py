"""Run the main identity and congruence checks over the standard catalog and print timings."""
import argparse
import time
from dataclasses import dataclass

from omlsym.catalog import standard_catalog
from omlsym.congruence import all_p_ideals, congruence_properties, malcev_csakany_check
from omlsym.lattice import shortcut_agrees
from omlsym.terms import check_identity, parse_equation

IDENTITIES = (
    "(x <+l> y) <+l> y = x",
    "x <d> y = y <d> x",
    "x <+l> y = y <+l> x",
    "(x <d> y) <d> z = x <d> (y <d> z)",
)


@dataclass(frozen=True)
class RunConfig:
    lattices: tuple[str, ...]
    congruences: bool = True


def run(cfg: RunConfig):
    catalog = standard_catalog()
    for name in cfg.lattices:
        L = catalog[name]
        start = time.perf_counter()
        verdicts = []
        for text in IDENTITIES:
            r = check_identity(L, *parse_equation(text))
            verdicts.append("ok" if r.holds else "cx")
        line = f"{name:>15} n={L.size:<3} identities={' '.join(verdicts)} shortcut={shortcut_agrees(L)}"
        if cfg.congruences:
            m, c = malcev_csakany_check(L)
            rep = congruence_properties(L)
            line += (f" p-ideals={len(all_p_ideals(L))} malcev={m.holds} csakany={c.holds}"
                     f" regular={rep.regular} uniform={rep.uniform} permutable={rep.permutable}")
        print(f"{line} [{time.perf_counter() - start:.2f} s]")


def main():
    names = list(standard_catalog())
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("lattices", nargs="*", default=names, help=f"any of {', '.join(names)}")
    ap.add_argument("--skip-congruences", action="store_true")
    args = ap.parse_args()
    unknown = set(args.lattices) - set(names)
    if unknown:
        ap.error(f"unknown lattices: {', '.join(sorted(unknown))}")
    run(RunConfig(tuple(args.lattices), not args.skip_congruences))


if __name__ == "__main__":
    main()
