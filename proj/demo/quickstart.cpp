// Checks x/(1+x) for weak contractivity, then runs a Mann iteration on x/2.

#include <iostream>

#include "fgwc/fgwc.hpp"

int main() {
    using namespace fgwc;

    const PiecewiseMap t("T", {Branch(Interval::closed(0.0, 100.0), LinearFractional{1.0, 0.0, 1.0, 1.0})});
    const MapBundle maps{t, std::nullopt, std::nullopt, {}};
    const auto psi = PsiFunction::power_ratio();
    const auto wc = check_inequality(InequalityKind::weakly_contractive(), maps, psi, {{501}});
    std::cout << "weakly contractive: " << (wc.passed ? "pass" : "fail") << " over " << wc.pairs_checked << " pairs\n";

    const MapBundle near_zero{PiecewiseMap("T", {Branch(Interval::closed(0.0, 1.0), LinearFractional{1.0, 0.0, 1.0, 1.0})}),
                              std::nullopt, std::nullopt, {}};
    const auto c = check_inequality(InequalityKind::contraction(0.9), near_zero, psi, {{501}});
    if (c.witness) {
        std::cout << "contraction k=0.9 fails at x=" << format_real(c.witness->x) << " y=" << format_real(c.witness->y)
                  << '\n';
    }

    const auto unit = Interval::closed(0.0, 1.0);
    const auto half = PiecewiseMap::affine(unit, 0.5, 0.0, "T");
    const auto id = PiecewiseMap::affine(unit, 1.0, 0.0, "f");
    RunConfig cfg;
    cfg.x0 = 1.0;
    cfg.target = 0.0;
    const auto tr = mann_iterate(half, id, id, StepSchedule::constant(0.5), cfg);
    std::cout << "mann: " << status_name(tr.status) << " after " << tr.iterations << " steps\n";
    write_trace_csv(std::cout, tr);
}
