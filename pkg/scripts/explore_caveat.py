"""Search for subsets that pass the weakened kernel test (x +l S) +l x in S but are not p-ideals."""
import argparse
from dataclasses import dataclass

from omlsym.catalog import build, parse_spec
from omlsym.congruence import kernel_caveat_search


@dataclass(frozen=True)
class SearchConfig:
    lattices: tuple[str, ...] = ("mo2", "mo3", "prod:bool2,mo2")
    max_size: int = 24


def run(cfg: SearchConfig):
    for spec in cfg.lattices:
        L = build(parse_spec(spec))
        found = kernel_caveat_search(L, cfg.max_size)
        if found is None:
            print(f"{spec}: no subset found")
            continue
        S, report = found
        members = ", ".join(L.name(e) for e in sorted(S))
        print(f"{spec}: {{{members}}} swapped_normal=True subgroup={report.subgroup_ok} normal={report.normal_ok}"
              f" order_ideal={report.order_ideal_ok}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("lattices", nargs="*", default=list(SearchConfig.lattices))
    ap.add_argument("--max-size", type=int, default=SearchConfig.max_size)
    args = ap.parse_args()
    run(SearchConfig(tuple(args.lattices), args.max_size))


if __name__ == "__main__":
    main()
