#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include <cubus/cubus.hpp>

#include "verify.hpp"

using namespace cubus;

namespace {

cplx parse_complex(const std::string& s)
{
    auto num = [&](const std::string& t) {
        std::size_t used = 0;
        double v;
        try {
            v = std::stod(t, &used);
        } catch (const std::logic_error&) {
            throw std::invalid_argument("not a number: " + t);
        }
        if (used != t.size()) throw std::invalid_argument("not a number: " + t);
        return v;
    };
    auto comma = s.find(',');
    if (comma == std::string::npos) return num(s);
    return {num(s.substr(0, comma)), num(s.substr(comma + 1))};
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

struct Common {
    std::string out;
    std::string config;
    int budget = 0;
    double tol = 0.0;
    int threads = 0;
    CLI::Option* budget_opt = nullptr;
    CLI::Option* tol_opt = nullptr;
    CLI::Option* threads_opt = nullptr;

    void attach(CLI::App* sub)
    {
        sub->add_option("--out", out, "output path (image, or report file; default stdout for reports)");
        sub->add_option("--config", config, "key=value settings file; flags take precedence");
        budget_opt = sub->add_option("--budget", budget, "iteration budget");
        tol_opt = sub->add_option("--tol", tol, "acceptance tolerance");
        threads_opt = sub->add_option("--threads", threads, "worker threads (fallback CUBUS_THREADS)");
    }

    Config settings() const
    {
        Config c = config.empty() ? Config{} : Config::load(config);
        if (budget_opt && budget_opt->count()) c.set("budget", std::to_string(budget));
        if (tol_opt && tol_opt->count()) {
            std::ostringstream s;
            s.precision(17);
            s << tol;
            c.set("tol", s.str());
        }
        if (threads_opt && threads_opt->count()) c.set("threads", std::to_string(threads));
        return c;
    }
};

RayOptions ray_options(const Config& c)
{
    RayOptions r;
    r.steps_per_level = c.integer("ray.steps_per_level", r.steps_per_level);
    r.max_levels = c.integer("ray.max_levels", r.max_levels);
    r.landing_tol = c.number("ray.landing_tol", r.landing_tol);
    r.potential_floor = c.number("ray.potential_floor", r.potential_floor);
    r.newton_max = c.integer("ray.newton_max", r.newton_max);
    return r;
}

PortraitOptions portrait_options(const Config& c)
{
    PortraitOptions p;
    p.qmax = c.integer("portrait.qmax", p.qmax);
    p.connect_budget = c.integer("budget", p.connect_budget);
    p.ray = ray_options(c);
    return p;
}

CycleOptions cycle_options(const Config& c)
{
    CycleOptions o;
    o.budget = c.integer("cycle.budget", o.budget);
    o.detect = c.number("cycle.detect", o.detect);
    o.max_period = c.integer("cycle.max_period", o.max_period);
    return o;
}

RenormOptions renorm_options(const Config& c)
{
    RenormOptions r;
    r.budget = c.integer("renorm.budget", r.budget);
    r.eps_angle = c.number("renorm.eps_angle", r.eps_angle);
    r.cycle = cycle_options(c);
    r.portrait = portrait_options(c);
    return r;
}

InverseOptions inverse_options(const Config& c)
{
    InverseOptions o;
    o.steps = c.integer("inverse.steps", o.steps);
    o.newton_max = c.integer("inverse.newton_max", o.newton_max);
    return o;
}

Json budgets_json(const Config& c)
{
    Json j = Json::object();
    for (const auto& [k, v] : c.values()) j[k] = v;
    return j;
}

class Output {
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw IoError("cannot open " + path + " for writing");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    void emit(const Report& r)
    {
        cubus::emit(stream(), r);
        if (!stream()) throw IoError("report write failed");
    }

private:
    std::unique_ptr<std::ofstream> file_;
};

Json portrait_json(const RayPortrait& P)
{
    return Json{{"angles", verify::angles_json(P.angles)},
                {"pq", P.rotation.str()},
                {"m", P.m},
                {"zeta", to_json(P.zeta)},
                {"landing_error", P.landing_error},
                {"sector_minus", P.sector_minus},
                {"sector_plus", P.sector_plus}};
}

Json optional_json(const std::optional<cplx>& z) { return z ? to_json(*z) : Json(nullptr); }

Json renorm_side_json(const RenormResult& r)
{
    Json j{{"side", to_string(r.side)},
           {"renormalizable", r.renormalizable},
           {"cycle_period", r.cycle_period},
           {"cycle_multiplier", to_json(r.cycle_multiplier)},
           {"c", optional_json(r.c)}};
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"cubus: dynamics of cubic polynomials P(w) = A(w^3 - 3w) + D"};
    app.require_subcommand(1);
    std::vector<std::unique_ptr<Common>> commons;
    auto common = [&](CLI::App* sub) {
        commons.push_back(std::make_unique<Common>());
        commons.back()->attach(sub);
        return commons.back().get();
    };

    std::function<void()> action;

    // center
    auto* center = app.add_subcommand("center", "superattracting center of a D_{q,q} component");
    std::string center_pq;
    int center_m = 1;
    center->add_option("pq", center_pq, "rotation number p/q")->required();
    center->add_option("m", center_m, "odd sector count")->required();
    auto* center_c = common(center);
    center->callback([&] {
        action = [&] {
            auto pq = parse_rotation(center_pq);
            auto c = center_dqq(pq, center_m);
            auto f = c.AD;
            cplx wm = -1.0, wp = 1.0;
            for (int k = 0; k < pq.q; ++k) wm = eval(f, wm), wp = eval(f, wp);
            Report r;
            r.command = "center";
            r.inputs = {{"pq", pq.str()}, {"m", center_m}};
            r.outputs = {{"A", to_json(f.A)}, {"D", to_json(f.D)},
                         {"residual", std::max(std::abs(wm + 1.0), std::abs(wp - 1.0))}};
            r.budgets = budgets_json(center_c->settings());
            Output(center_c->out).emit(r);
        };
    });

    // portrait
    auto* portrait = app.add_subcommand("portrait", "fixed-ray portrait of P_{A,D}");
    std::string pA = "-0.5", pD = "0";
    portrait->add_option("--A", pA, "A as re or re,im");
    portrait->add_option("--D", pD, "D as re or re,im");
    auto* portrait_c = common(portrait);
    portrait->callback([&] {
        action = [&] {
            auto cfg = portrait_c->settings();
            CubicAD f(parse_complex(pA), parse_complex(pD));
            auto P = fixed_ray_portrait(f, portrait_options(cfg));
            Report r;
            r.command = "portrait";
            r.inputs = {{"A", to_json(f.A)}, {"D", to_json(f.D)}};
            r.outputs = P ? portrait_json(*P) : Json{{"found", false}};
            r.tolerances = {{"landing_tol", ray_options(cfg).landing_tol}};
            r.budgets = budgets_json(cfg);
            Output(portrait_c->out).emit(r);
        };
    });

    // ray
    auto* ray = app.add_subcommand("ray", "trace an external ray");
    std::string rA = "-0.5", rD = "0", rc, rangle;
    bool rpoints = false;
    ray->add_option("--A", rA, "A as re or re,im");
    ray->add_option("--D", rD, "D as re or re,im");
    ray->add_option("--c", rc, "trace for the quadratic z^2 + c instead");
    ray->add_option("--angle", rangle, "rational angle n/d")->required();
    ray->add_flag("--points", rpoints, "include the traced polyline (monic plane)");
    auto* ray_c = common(ray);
    ray->callback([&] {
        action = [&] {
            auto cfg = ray_c->settings();
            auto theta = parse_angle(rangle);
            RayTrace tr;
            Report r;
            r.command = "ray";
            if (!rc.empty()) {
                QuadParam q{parse_complex(rc)};
                tr = trace_ray(q, theta, ray_options(cfg));
                r.inputs = {{"c", to_json(q.c)}, {"angle", theta.str()}};
            } else {
                CubicAD f(parse_complex(rA), parse_complex(rD));
                tr = trace_ray(f, theta, ray_options(cfg));
                r.inputs = {{"A", to_json(f.A)}, {"D", to_json(f.D)}, {"angle", theta.str()}};
            }
            r.outputs = {{"complete", tr.complete}, {"landed", tr.landed}, {"endpoint", to_json(tr.endpoint)},
                         {"samples", tr.points.size()}, {"potential_floor", tr.potential_floor}};
            if (!tr.failure.empty()) r.outputs["failure"] = tr.failure;
            if (rpoints) {
                Json pts = Json::array();
                for (cplx z : tr.points) pts.push_back(to_json(z));
                r.outputs["points"] = pts;
            }
            r.budgets = budgets_json(cfg);
            Output(ray_c->out).emit(r);
            if (!tr.complete) throw NumericError(tr.failure);
        };
    });

    // renorm
    auto* renorm = app.add_subcommand("renorm", "left and right renormalizations straightened");
    std::string nA = "-0.5", nD = "0";
    renorm->add_option("--A", nA, "A as re or re,im");
    renorm->add_option("--D", nD, "D as re or re,im");
    auto* renorm_c = common(renorm);
    renorm->callback([&] {
        action = [&] {
            auto cfg = renorm_c->settings();
            CubicAD f(parse_complex(nA), parse_complex(nD));
            auto rp = renorm_pair(f, renorm_options(cfg));
            Report r;
            r.command = "renorm";
            r.inputs = {{"A", to_json(f.A)}, {"D", to_json(f.D)}};
            r.outputs = {{"portrait", portrait_json(rp.portrait)},
                         {"left", renorm_side_json(rp.left)},
                         {"right", renorm_side_json(rp.right)},
                         {"c", optional_json(rp.c)},
                         {"c_tilde", optional_json(rp.c_tilde)},
                         {"tuned", optional_json(rp.tuned)},
                         {"tuned_tilde", optional_json(rp.tuned_tilde)}};
            r.budgets = budgets_json(cfg);
            Output(renorm_c->out).emit(r);
        };
    });

    // intertwine
    auto* inter = app.add_subcommand("intertwine", "h_{p/q,m}(c, c~) via the multiplier pair");
    std::string ipq = "0", ic, ict, ilm, ilp;
    int im = 1;
    inter->add_option("--pq", ipq, "rotation number p/q");
    inter->add_option("--m", im, "odd sector count");
    inter->add_option("--c", ic, "quadratic parameter in the p/q component");
    inter->add_option("--ctilde", ict, "second quadratic parameter");
    inter->add_option("--lm", ilm, "multiplier lambda- directly");
    inter->add_option("--lp", ilp, "multiplier lambda+ directly");
    auto* inter_c = common(inter);
    inter->callback([&] {
        action = [&] {
            auto cfg = inter_c->settings();
            auto pq = parse_rotation(ipq);
            MultiplierPair pair;
            Report r;
            r.command = "intertwine";
            if (!ic.empty() || !ict.empty()) {
                if (ic.empty() || ict.empty()) throw std::invalid_argument("--c and --ctilde go together");
                cplx c = parse_complex(ic), ct = parse_complex(ict);
                pair = {quad_component_multiplier(pq, c), quad_component_multiplier(pq, ct)};
                r.inputs = {{"pq", pq.str()}, {"m", im}, {"c", to_json(c)}, {"c_tilde", to_json(ct)}};
            } else {
                if (ilm.empty() || ilp.empty()) throw std::invalid_argument("give --c/--ctilde or --lm/--lp");
                pair = {parse_complex(ilm), parse_complex(ilp)};
                r.inputs = {{"pq", pq.str()}, {"m", im}, {"lm", to_json(pair.lm)}, {"lp", to_json(pair.lp)}};
            }
            auto f = lambda_inverse(pq, im, pair, inverse_options(cfg));
            auto back = lambda_map(f, {cycle_options(cfg)});
            r.outputs = {{"A", to_json(f.A)},
                         {"D", to_json(f.D)},
                         {"B", to_json(f.A * f.D * f.D)},
                         {"round_trip_error", std::max(std::abs(back.lm - pair.lm), std::abs(back.lp - pair.lp))}};
            r.budgets = budgets_json(cfg);
            Output(inter_c->out).emit(r);
        };
    });

    // yoccoz
    auto* yocc = app.add_subcommand("yoccoz", "Yoccoz inequality at a repelling fixed point");
    std::string ylam, ypq = "0";
    int ym = 1, yd = 2;
    yocc->add_option("--lambda", ylam, "multiplier as re or re,im")->required();
    yocc->add_option("--pq", ypq, "combinatorial rotation number");
    yocc->add_option("--m", ym, "number of ray cycles");
    yocc->add_option("--degree", yd, "polynomial degree");
    auto* yocc_c = common(yocc);
    yocc->callback([&] {
        action = [&] {
            auto pq = parse_rotation(ypq);
            cplx lam = parse_complex(ylam);
            auto y = yoccoz_check(yd, lam, pq, ym);
            Report r;
            r.command = "yoccoz";
            r.inputs = {{"lambda", to_json(lam)}, {"pq", pq.str()}, {"m", ym}, {"degree", yd}};
            r.outputs = {{"holds", y.holds}, {"lhs", y.lhs}, {"rhs", y.rhs}, {"rho", to_json(y.rho)}};
            Output(yocc_c->out).emit(r);
        };
    });

    // parabolic
    auto* para = app.add_subcommand("parabolic", "parabolic fixed point of z + a z^2 + z^3");
    para->require_subcommand(1);
    auto* p_index = para->add_subcommand("index", "holomorphic index at 0");
    std::string pa_index = "1";
    p_index->add_option("--a", pa_index, "a as re or re,im");
    auto* p_index_c = common(p_index);
    p_index->callback([&] {
        action = [&] {
            auto cfg = p_index_c->settings();
            cplx a = parse_complex(pa_index);
            IndexOptions io;
            io.nodes = cfg.integer("index.nodes", io.nodes);
            auto v = holomorphic_index(ParabolicParams(a, 0.0), 0.0, io);
            Report r;
            r.command = "parabolic index";
            r.inputs = {{"a", to_json(a)}};
            r.outputs = {{"eta", to_json(v.eta)},
                         {"closed_form", to_json(1.0 / (a * a))},
                         {"error", std::abs(v.eta - 1.0 / (a * a))},
                         {"class", to_string(classify_parabolic(v.eta))},
                         {"radius", v.radius}};
            r.budgets = budgets_json(cfg);
            Output(p_index_c->out).emit(r);
        };
    });

    auto* p_horn = para->add_subcommand("horn", "horn map constants C+ and C-");
    double ph_a = 1.0;
    std::string ph_heights = "4,6,8";
    bool ph_ext = false;
    p_horn->add_option("--a", ph_a, "real a > 0");
    p_horn->add_option("--heights", ph_heights, "comma separated heights");
    p_horn->add_flag("--extended", ph_ext, "long double arithmetic");
    auto* p_horn_c = common(p_horn);
    p_horn->callback([&] {
        action = [&] {
            auto cfg = p_horn_c->settings();
            std::vector<double> hs;
            for (const auto& t : split(ph_heights, ',')) hs.push_back(parse_complex(t).real());
            HornOptions ho;
            ho.samples = cfg.integer("horn.samples", ho.samples);
            ho.max_residual = cfg.number("horn.max_residual", ho.max_residual);
            Report r;
            r.command = "parabolic horn";
            r.inputs = {{"a", ph_a}, {"heights", hs}, {"extended", ph_ext}};
            auto fill = [&](const auto& H) {
                Json plus = Json::array(), minus = Json::array();
                for (const auto& z : H.plus_by_height) plus.push_back(to_json(cplx(double(z.real()), double(z.imag()))));
                for (const auto& z : H.minus_by_height) minus.push_back(to_json(cplx(double(z.real()), double(z.imag()))));
                r.outputs = {{"c_plus", to_json(cplx(double(H.c_plus.real()), double(H.c_plus.imag())))},
                             {"c_minus", to_json(cplx(double(H.c_minus.real()), double(H.c_minus.imag())))},
                             {"plus_by_height", plus},
                             {"minus_by_height", minus},
                             {"residual", double(H.residual)}};
            };
            if (ph_ext) fill(horn_asymptotics<long double>(ph_a, hs, ho));
            else fill(horn_asymptotics<double>(ph_a, hs, ho));
            r.tolerances = {{"max_residual", ho.max_residual}};
            r.budgets = budgets_json(cfg);
            Output(p_horn_c->out).emit(r);
        };
    });

    auto* p_prod = para->add_subcommand("product", "horn-map eigenvalue product against its closed form");
    double pp_a = 0.8;
    bool pp_ext = false;
    p_prod->add_option("--a", pp_a, "real a > 0");
    p_prod->add_flag("--extended", pp_ext, "long double arithmetic");
    auto* p_prod_c = common(p_prod);
    p_prod->callback([&] {
        action = [&] {
            auto cfg = p_prod_c->settings();
            auto p = pp_ext ? product_identity<long double>(pp_a) : product_identity<double>(pp_a);
            Report r;
            r.command = "parabolic product";
            r.inputs = {{"a", pp_a}, {"extended", pp_ext}};
            r.outputs = {{"lhs", to_json(p.lhs)}, {"rhs", to_json(p.rhs)}, {"err", p.err}};
            r.budgets = budgets_json(cfg);
            Output(p_prod_c->out).emit(r);
        };
    });

    auto* p_eig = para->add_subcommand("eigprod", "multipliers of the perturbed fixed pair");
    double pe_a = 0.8, pe_eps = 1e-4;
    p_eig->add_option("--a", pe_a, "real a > 0");
    p_eig->add_option("--eps", pe_eps, "perturbation eps > 0");
    auto* p_eig_c = common(p_eig);
    p_eig->callback([&] {
        action = [&] {
            auto e = eigprod_check(pe_a, pe_eps);
            Report r;
            r.command = "parabolic eigprod";
            r.inputs = {{"a", pe_a}, {"eps", pe_eps}};
            r.outputs = {{"lambda_plus", to_json(e.lambda_plus)},
                         {"lambda_minus", to_json(e.lambda_minus)},
                         {"rho_plus", to_json(e.rho_plus)},
                         {"rho_minus", to_json(e.rho_minus)},
                         {"product", e.product},
                         {"product_printed_sign", e.product_printed},
                         {"target", e.target},
                         {"asymptotic_ratio", e.asymptotic_ratio}};
            Output(p_eig_c->out).emit(r);
        };
    });

    auto* p_con = para->add_subcommand("conarg", "value where horn critical values and points are equally far apart");
    double pc_lo = 0.3, pc_hi = 1.6;
    int pc_grid = 16;
    p_con->add_option("--lo", pc_lo, "interval start");
    p_con->add_option("--hi", pc_hi, "interval end");
    p_con->add_option("--grid", pc_grid, "grid points (>= 16)");
    auto* p_con_c = common(p_con);
    p_con->callback([&] {
        action = [&] {
            auto cfg = p_con_c->settings();
            ConargOptions co;
            co.tol = cfg.number("conarg.tol", co.tol);
            auto res = conarg_search(pc_lo, pc_hi, pc_grid, co);
            Json table = Json::array();
            for (const auto& g : res.table)
                table.push_back({{"a", g.a}, {"gap", g.gap}, {"critical_point", to_json(g.critical_point)},
                                 {"critical_value", to_json(g.critical_value)}});
            Report r;
            r.command = "parabolic conarg";
            r.inputs = {{"lo", pc_lo}, {"hi", pc_hi}, {"grid", pc_grid}};
            r.outputs = {{"a_star", res.a_star ? Json(*res.a_star) : Json(nullptr)},
                         {"gap_at_star", res.gap_at_star},
                         {"table", table}};
            r.tolerances = {{"bisection", co.tol}};
            Output(p_con_c->out).emit(r);
            if (!res.a_star) throw NumericError("no sign change of the gap on the grid");
        };
    });

    // render
    auto* render = app.add_subcommand("render", "PPM images of parameter slices and Julia sets");
    render->require_subcommand(1);
    std::string window = "-2,2,-2,2", palette = "classic";
    int width = 400, height = 400;
    auto image_opts = [&](CLI::App* sub) {
        sub->add_option("--width", width, "pixels");
        sub->add_option("--height", height, "pixels");
        sub->add_option("--window", window, "re_min,re_max,im_min,im_max");
        sub->add_option("--palette", palette, "classic or gray");
    };
    auto image_spec = [&] {
        ImageSpec s;
        s.width = width;
        s.height = height;
        s.palette = palette;
        auto w = split(window, ',');
        if (w.size() != 4) throw std::invalid_argument("--window needs four numbers");
        s.window = {parse_complex(w[0]).real(), parse_complex(w[1]).real(), parse_complex(w[2]).real(),
                    parse_complex(w[3]).real()};
        s.validate();
        return s;
    };
    auto spec_json = [](const ImageSpec& s) {
        return Json{{"width", s.width},
                    {"height", s.height},
                    {"window", {s.window.re_min, s.window.re_max, s.window.im_min, s.window.im_max}},
                    {"palette", s.palette}};
    };

    auto* r_param = render->add_subcommand("param", "parameter slice");
    std::string family = "real-AB";
    r_param->add_option("--family", family, "real-AB or symmetry-locus");
    image_opts(r_param);
    auto* r_param_c = common(r_param);
    r_param->callback([&] {
        action = [&] {
            auto cfg = r_param_c->settings();
            if (r_param_c->out.empty()) throw std::invalid_argument("--out is required for images");
            auto spec = image_spec();
            int budget = cfg.integer("budget", cfg.integer("render.budget", 500));
            auto img = render_param(spec, parse_param_family(family), budget, resolve_threads(cfg.integer("threads", 0)));
            img.write_ppm(r_param_c->out);
            Report r;
            r.command = "render param";
            r.inputs = {{"family", family}, {"spec", spec_json(spec)}};
            r.outputs = {{"image", r_param_c->out}};
            r.budgets = {{"budget", budget}};
            Output(std::string{}).emit(r);
        };
    });

    auto* r_julia = render->add_subcommand("julia", "Julia set in the monic plane with overlays");
    std::string jA = "-0.5", jD = "0", jc, jrays;
    double jeq = 0.0, jslope = 0.5, jrho = 0.5;
    bool jsectors = false;
    r_julia->add_option("--A", jA, "A as re or re,im");
    r_julia->add_option("--D", jD, "D as re or re,im");
    r_julia->add_option("--c", jc, "render z^2 + c instead");
    r_julia->add_option("--rays", jrays, "comma separated rational angles");
    r_julia->add_option("--equipotential", jeq, "draw the level set G = value");
    r_julia->add_flag("--sectors", jsectors, "quadratic only: sectors around the alpha-fixed-point rays");
    r_julia->add_option("--slope", jslope, "sector slope t");
    r_julia->add_option("--rho", jrho, "sector top potential");
    image_opts(r_julia);
    auto* r_julia_c = common(r_julia);
    r_julia->callback([&] {
        action = [&] {
            auto cfg = r_julia_c->settings();
            if (r_julia_c->out.empty()) throw std::invalid_argument("--out is required for images");
            auto spec = image_spec();
            int budget = cfg.integer("budget", cfg.integer("render.budget", 500));
            auto ropt = ray_options(cfg);
            const bool quad = !jc.empty();
            std::optional<QuadParam> qp;
            std::optional<CubicAD> cp;
            MonicDepressed f;
            if (quad) qp = QuadParam{parse_complex(jc)}, f = to_monic(*qp);
            else cp = CubicAD(parse_complex(jA), parse_complex(jD)), f = to_monic(*cp);
            auto img = render_julia(spec, f, budget, resolve_threads(cfg.integer("threads", 0)));
            Json overlays = Json::array(), failures = Json::array();
            std::size_t color = 0;
            for (const auto& s : split(jrays, ',')) {
                try {
                    auto theta = parse_angle(s);
                    auto tr = quad ? trace_ray(*qp, theta, ropt) : trace_ray(*cp, theta, ropt);
                    draw_polyline(img, spec, tr.points, overlay_color(color++));
                    overlays.push_back({{"ray", theta.str()}, {"landed", tr.landed}, {"endpoint", to_json(tr.endpoint)}});
                    if (!tr.complete) failures.push_back({{"ray", theta.str()}, {"error", tr.failure}});
                } catch (const std::invalid_argument&) {
                    throw;
                } catch (const std::exception& e) {
                    failures.push_back({{"ray", s}, {"error", e.what()}});
                }
            }
            if (jeq > 0.0) {
                try {
                    auto pts = quad ? equipotential(*qp, jeq, 1024, ropt) : equipotential(*cp, jeq, 1024, ropt);
                    pts.push_back(pts.front());
                    draw_polyline(img, spec, pts, {255, 255, 255});
                    overlays.push_back({{"equipotential", jeq}});
                } catch (const NumericError& e) {
                    failures.push_back({{"equipotential", jeq}, {"error", e.what()}});
                }
            }
            if (jsectors) {
                if (!quad) throw std::invalid_argument("--sectors needs --c");
                // the alpha fixed point: the 2-cycle of rays 1/3, 2/3 for the basilica-type limb
                for (const auto& theta : {Angle(1, 3), Angle(2, 3)}) {
                    try {
                        auto [lo, hi] = trace_sector(*qp, theta, jslope, jrho, ropt);
                        auto rgb = overlay_color(color++);
                        draw_polyline(img, spec, lo.points, rgb);
                        draw_polyline(img, spec, hi.points, rgb);
                        overlays.push_back({{"sector", theta.str()}, {"slope", jslope}, {"rho", jrho}});
                    } catch (const std::exception& e) {
                        failures.push_back({{"sector", theta.str()}, {"error", e.what()}});
                    }
                }
            }
            img.write_ppm(r_julia_c->out);
            Report r;
            r.command = "render julia";
            r.inputs = quad ? Json{{"c", to_json(qp->c)}} : Json{{"A", to_json(cp->A)}, {"D", to_json(cp->D)}};
            r.inputs["spec"] = spec_json(spec);
            r.outputs = {{"image", r_julia_c->out}, {"overlays", overlays}, {"overlay_failures", failures}};
            r.budgets = {{"budget", budget}};
            Output(std::string{}).emit(r);
        };
    });

    // verify
    auto* ver = app.add_subcommand("verify", "run an acceptance battery");
    std::string suite;
    ver->add_option("suite", suite, "portrait, renorm, intertwine, parabolic or index")
        ->required()
        ->check(CLI::IsMember({"portrait", "renorm", "intertwine", "parabolic", "index"}));
    auto* ver_c = common(ver);
    bool verify_failed = false;
    ver->callback([&] {
        action = [&] {
            auto s = verify::run_suite(suite);
            Report r;
            r.command = "verify " + suite;
            Json checks = Json::array();
            for (const auto& c : s.checks) checks.push_back(verify::to_json(c));
            r.outputs = s.extra;
            r.outputs["checks"] = checks;
            r.outputs["pass"] = s.pass();
            Output(ver_c->out).emit(r);
            verify_failed = !s.pass();
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    try {
        if (action) action();
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return verify_failed ? 3 : 0;
}
