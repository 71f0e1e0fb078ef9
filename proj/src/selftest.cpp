#include <cmath>
#include <functional>

#include "mixlab/cli.hpp"
#include "mixlab/czd.hpp"
#include "mixlab/maximal.hpp"
#include "mixlab/singular.hpp"
#include "mixlab/verify.hpp"
#include "mixlab/weights.hpp"

namespace mixlab {

namespace {

bool close(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

template <class E>
bool throws(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const E&) {
        return true;
    } catch (...) {
        return false;
    }
    return false;
}

}  // namespace

std::vector<SelftestCase> run_selftest() {
    using young::YoungFunction;
    std::vector<SelftestCase> out;
    auto check = [&](const std::string& name, const std::function<bool()>& fn) {
        try {
            out.push_back({name, fn(), ""});
        } catch (const std::exception& e) {
            out.push_back({name, false, e.what()});
        }
    };

    check("grid centres (L=4, J=3)", [] {
        const Grid g = make_grid(4.0, 3);
        return g.h() == 1.0 && g.center(0) == -3.5 && g.center(7) == 3.5;
    });
    check("grid (L=1, J=4)", [] {
        const Grid g = make_grid(1.0, 4);
        return g.N() == 16 && g.h() == 0.125;
    });
    check("grid resolution below minimum refused", [] { return throws<ConfigError>([] { make_grid(4.0, 2); }); });
    check("integrate 1 over the domain", [] {
        const Grid g = make_grid(3.0, 6);
        return close(integrate(SampledFunction::constant(g, 1.0)), 6.0);
    });
    check("dyadic count j_max=1", [] { return dyadic_intervals(make_grid(1.0, 4), 1, {Shift::None}).size() == 3; });
    check("llogl(1,1) at 1", [] { return YoungFunction::phi_m(1)(1.0) == 1.0; });
    check("Young functions vanish at 0", [] {
        for (const auto& phi : {YoungFunction::phi_m(2), YoungFunction::expl(1.0), YoungFunction::power(3.0)})
            if (eval(phi, 0.0) != 0.0) return false;
        return true;
    });
    check("identity inverse", [] { return young::inverse(YoungFunction::identity(), 7.0) == 7.0; });
    check("power inverse", [] { return close(young::inverse(YoungFunction::power(2.0), 9.0), 3.0); });
    check("conjugate of the identity is the step", [] {
        const YoungFunction c = young::complementary(YoungFunction::identity());
        return c(1.0) == 0.0 && std::isinf(c(1.5));
    });
    check("luxemburg norm of a constant", [] {
        const Grid g = make_grid(2.0, 6);
        return close(young::luxemburg_norm(SampledFunction::constant(g, 3.0), CellRange{0, g.N()},
                                           YoungFunction::phi_m(1)),
                     3.0, 1e-9);
    });
    check("luxemburg norm of zero", [] {
        const Grid g = make_grid(2.0, 6);
        return young::luxemburg_norm(SampledFunction::zeros(g), CellRange{0, g.N()}, YoungFunction::phi_m(1)) == 0.0;
    });
    check("A_p of the constant weight", [] {
        const Grid g = make_grid(2.0, 6);
        return close(ap_constant(SampledFunction::constant(g, 1.0), 1.0), 1.0) &&
               close(ap_constant(SampledFunction::constant(g, 1.0), 2.0), 1.0);
    });
    check("BMO of a constant", [] { return bmo_norm(SampledFunction::constant(make_grid(2.0, 6), 5.0)) == 0.0; });
    check("maximal of a constant", [] {
        const SampledFunction m = hl_maximal(SampledFunction::constant(make_grid(2.0, 6), -2.0));
        for (double x : m.values())
            if (!close(x, 2.0)) return false;
        return true;
    });
    check("decomposition below height selects nothing", [] {
        const SampledFunction f = SampledFunction::constant(make_grid(2.0, 6), 1.0);
        const DecompositionResult d = cz_decompose(f, 2.0);
        return d.cubes.empty() && d.g.data() == f.data() && validate_decomposition(d, f).all_pass();
    });
    check("Hilbert transform of zero", [] {
        const SampledFunction h = hilbert(SampledFunction::zeros(make_grid(2.0, 6)));
        for (double x : h.values())
            if (x != 0.0) return false;
        return true;
    });
    check("commutator with constant symbol", [] {
        const Grid g = make_grid(2.0, 6);
        const SampledFunction f = sample([](double x) { return std::exp(-x * x); }, g);
        const SampledFunction c = commutator(SampledFunction::constant(g, 3.0), f, 2);
        for (double x : c.values())
            if (x != 0.0) return false;
        return true;
    });
    check("commutator m=0 is the Hilbert transform", [] {
        const Grid g = make_grid(2.0, 6);
        const SampledFunction f = sample([](double x) { return std::exp(-x * x); }, g);
        const SampledFunction b = sample([](double x) { return std::log(std::abs(x)); }, g);
        return commutator(b, f, 0).data() == hilbert(f).data();
    });
    check("kernel difference vanishes at y = z", [] {
        const ConvolutionKernel k = hilbert_kernel();
        return k.K(3.0 - 1.0) - k.K(3.0 - 1.0) == 0.0;
    });
    check("weak lhs of zero", [] {
        const Grid g = make_grid(2.0, 6);
        const SampledFunction one = SampledFunction::constant(g, 1.0);
        return verify::weak_lhs(SampledFunction::zeros(g), one, one, 0.5, 0.05) == 0.0;
    });
    check("modular rhs, linear case", [] {
        const Grid g = make_grid(2.0, 6);
        const SampledFunction one = SampledFunction::constant(g, 1.0);
        return close(verify::modular_rhs(one, YoungFunction::identity(), one, one, 2.0), 2.0);
    });
    check("set partition |x|=3, k=1", [] {
        const verify::SetPartition p = verify::theorem3_set_partition(3.0, 1, 1.0, 1.0);
        return p.G && p.I && !p.L && !p.C;
    });
    check("set partition |x|=1, k=1", [] { return verify::theorem3_set_partition(1.0, 1, 1.0, 1.0).C; });
    return out;
}

}  // namespace mixlab
