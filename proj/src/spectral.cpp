#include "bqlab/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>

namespace bq {

double bracket(double x) { return 1.0 + std::abs(x); }

double gamma(double xi)
{
    // sqrt(xi^2 + xi^4) = |xi| sqrt(1 + xi^2)
    return std::abs(xi) * std::sqrt(1.0 + xi * xi);
}

namespace {

// 0 for x <= 0, 1 for x >= 1, built from exp(-1/x).
double smooth_step(double x)
{
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / x);
    const double b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
}

} // namespace

double theta(double t)
{
    const double r = std::abs(t);
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    return 1.0 - smooth_step(r - 1.0);
}

double theta_T(double t, double T)
{
    if (!(T > 0.0)) throw std::invalid_argument("theta_T: T must be positive");
    return theta(t / T);
}

// --- grids --------------------------------------------------------------

FrequencyGrid::FrequencyGrid(double half_width, int n_modes)
    : half_width_(half_width), n_(n_modes), dxi_(std::numbers::pi / half_width)
{
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw std::invalid_argument("FrequencyGrid: half_width must be positive and finite");
    if (n_modes < 3 || n_modes % 2 == 0)
        throw std::invalid_argument("FrequencyGrid: n_modes must be odd and >= 3, got " +
                                    std::to_string(n_modes));
}

int FrequencyGrid::index_of(int k) const
{
    const int m = max_wavenumber();
    if (k < -m || k > m) return -1;
    return k + m;
}

int FrequencyGrid::nearest_index(double xi) const
{
    const long k = std::lround(xi / dxi_);
    const long m = max_wavenumber();
    return static_cast<int>(std::clamp(k, -m, m) + m);
}

std::vector<double> FrequencyGrid::nodes() const
{
    std::vector<double> out(n_);
    for (int i = 0; i < n_; ++i) out[i] = node(i);
    return out;
}

std::vector<double> FrequencyGrid::positions() const
{
    std::vector<double> out(n_);
    for (int j = 0; j < n_; ++j) out[j] = x(j);
    return out;
}

SpaceTimeGrid::SpaceTimeGrid(FrequencyGrid space, double t_min, double t_max, int n_times)
    : space_(space), t_min_(t_min), t_max_(t_max), n_t_(n_times)
{
    if (!(t_min < t_max)) throw std::invalid_argument("SpaceTimeGrid: need t_min < t_max");
    if (n_times < 5 || n_times % 2 == 0)
        throw std::invalid_argument("SpaceTimeGrid: n_times must be odd and >= 5, got " +
                                    std::to_string(n_times));
}

double SpaceTimeGrid::dtau() const { return 2.0 * std::numbers::pi / (t_max_ - t_min_); }

std::vector<double> SpaceTimeGrid::times() const
{
    std::vector<double> out(n_t_);
    for (int m = 0; m < n_t_; ++m) out[m] = time(m);
    return out;
}

std::vector<double> SpaceTimeGrid::taus() const
{
    std::vector<double> out(n_t_);
    for (int j = 0; j < n_t_; ++j) out[j] = tau(j);
    return out;
}

// --- FFTW plumbing --------------------------------------------------------

namespace {

// Strided batch of 1-D transforms, executed in place on caller buffers.
struct BatchLayout {
    int n;
    int howmany;
    int stride;
    int dist;
    int sign;
    auto key() const { return std::tie(n, howmany, stride, dist, sign); }
    bool operator<(const BatchLayout& o) const { return key() < o.key(); }
};

class PlanCache {
public:
    ~PlanCache()
    {
        for (auto& [layout, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(const BatchLayout& layout)
    {
        std::lock_guard lock(mutex_);
        if (auto it = plans_.find(layout); it != plans_.end()) return it->second;
        const std::size_t total =
            static_cast<std::size_t>(layout.n - 1) * layout.stride +
            static_cast<std::size_t>(layout.howmany - 1) * layout.dist + 1;
        fftw_complex* scratch = fftw_alloc_complex(total);
        int n = layout.n;
        fftw_plan plan = fftw_plan_many_dft(1, &n, layout.howmany, scratch, nullptr, layout.stride,
                                            layout.dist, scratch, nullptr, layout.stride,
                                            layout.dist, layout.sign,
                                            FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(scratch);
        if (plan == nullptr) throw std::runtime_error("fftw: planning failed");
        plans_.emplace(layout, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<BatchLayout, fftw_plan> plans_;
};

PlanCache& plan_cache()
{
    static PlanCache cache;
    return cache;
}

void execute(const BatchLayout& layout, std::vector<complex>& data)
{
    fftw_plan plan = plan_cache().get(layout);
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, p, p);
}

// Axis description for the centred, scaled transform.
struct Axis {
    int n;
    double h;            // sample spacing (dx or dt)
    double w;            // dual spacing (dxi or dtau)
    double start;        // first sample coordinate
    bool half_turn;      // start * w == -pi exactly (spatial axis)

    // exp(-i * omega_k * start) for centred index i.
    std::vector<complex> phases() const
    {
        std::vector<complex> out(n);
        const int m = (n - 1) / 2;
        for (int i = 0; i < n; ++i) {
            const int k = i - m;
            if (half_turn) {
                out[i] = (k % 2 == 0) ? 1.0 : -1.0;
            } else {
                const double angle = -k * w * start;
                out[i] = complex(std::cos(angle), std::sin(angle));
            }
        }
        return out;
    }
};

Axis space_axis(const FrequencyGrid& g)
{
    return {g.size(), g.dx(), g.spacing(), -g.half_width(), true};
}

Axis time_axis(const SpaceTimeGrid& g)
{
    return {g.n_times(), g.dt(), g.dtau(), g.t_min(), false};
}

int wrap(int k, int n) { return ((k % n) + n) % n; }

// Transform along one axis of a row-major [rows][cols] array; `along_cols`
// selects the column index as the transformed axis.
std::vector<complex> axis_transform(std::span<const complex> in, int rows, int cols,
                                    bool along_cols, const Axis& axis, bool forward)
{
    const int n = along_cols ? cols : rows;
    const int other = along_cols ? rows : cols;
    const int stride = along_cols ? 1 : cols;
    const int dist = along_cols ? cols : 1;
    const int m = (n - 1) / 2;
    const auto phase = axis.phases();

    auto at = [&](int line, int pos) -> std::size_t {
        return static_cast<std::size_t>(line) * dist + static_cast<std::size_t>(pos) * stride;
    };

    std::vector<complex> work(in.begin(), in.end());
    if (forward) {
        execute({n, other, stride, dist, FFTW_FORWARD}, work);
        std::vector<complex> out(work.size());
        for (int line = 0; line < other; ++line)
            for (int i = 0; i < n; ++i)
                out[at(line, i)] = axis.h * phase[i] * work[at(line, wrap(i - m, n))];
        return out;
    }

    std::vector<complex> shuffled(work.size());
    for (int line = 0; line < other; ++line)
        for (int i = 0; i < n; ++i)
            shuffled[at(line, wrap(i - m, n))] = work[at(line, i)] * std::conj(phase[i]);
    execute({n, other, stride, dist, FFTW_BACKWARD}, shuffled);
    const double scale = axis.w / (2.0 * std::numbers::pi);
    for (auto& v : shuffled) v *= scale;
    return shuffled;
}

void require_size(std::size_t got, std::size_t want, const char* what)
{
    if (got != want)
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(want) +
                                    " values, got " + std::to_string(got));
}

} // namespace

std::vector<complex> dft_forward(const FrequencyGrid& grid, std::span<const complex> samples)
{
    require_size(samples.size(), grid.size(), "dft_forward");
    return axis_transform(samples, 1, grid.size(), true, space_axis(grid), true);
}

std::vector<complex> dft_inverse(const FrequencyGrid& grid, std::span<const complex> spectrum)
{
    require_size(spectrum.size(), grid.size(), "dft_inverse");
    return axis_transform(spectrum, 1, grid.size(), true, space_axis(grid), false);
}

std::vector<complex> dft2_forward(const SpaceTimeGrid& grid, std::span<const complex> samples)
{
    const int rows = grid.n_times(), cols = grid.space().size();
    require_size(samples.size(), static_cast<std::size_t>(rows) * cols, "dft2_forward");
    auto tmp = axis_transform(samples, rows, cols, true, space_axis(grid.space()), true);
    return axis_transform(tmp, rows, cols, false, time_axis(grid), true);
}

std::vector<complex> dft2_inverse(const SpaceTimeGrid& grid, std::span<const complex> spectrum)
{
    const int rows = grid.n_times(), cols = grid.space().size();
    require_size(spectrum.size(), static_cast<std::size_t>(rows) * cols, "dft2_inverse");
    auto tmp = axis_transform(spectrum, rows, cols, false, time_axis(grid), false);
    return axis_transform(tmp, rows, cols, true, space_axis(grid.space()), false);
}

std::vector<complex> dft_time_inverse(const SpaceTimeGrid& grid, std::span<const complex> spectrum)
{
    const int rows = grid.n_times(), cols = grid.space().size();
    require_size(spectrum.size(), static_cast<std::size_t>(rows) * cols, "dft_time_inverse");
    return axis_transform(spectrum, rows, cols, false, time_axis(grid), false);
}

std::vector<complex> dft_time_forward(const SpaceTimeGrid& grid, std::span<const complex> samples)
{
    const int rows = grid.n_times(), cols = grid.space().size();
    require_size(samples.size(), static_cast<std::size_t>(rows) * cols, "dft_time_forward");
    return axis_transform(samples, rows, cols, false, time_axis(grid), true);
}

} // namespace bq
