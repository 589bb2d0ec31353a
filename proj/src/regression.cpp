#include "fogsim/regression.hpp"

#include "fogsim/csv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fogsim
{
    std::size_t arity(Schema s) noexcept
    {
        return s == Schema::ExecTimeBase ? 4 : 6;
    }

    std::string_view to_string(Schema s)
    {
        switch (s)
        {
        case Schema::ExecTimeBase:
            return "ExecTimeBase";
        case Schema::ExecTimeFull:
            return "ExecTimeFull";
        case Schema::EnergyFull:
            return "EnergyFull";
        }
        return "Unknown";
    }

    Schema parse_schema(std::string_view name)
    {
        for (Schema s : {Schema::ExecTimeBase, Schema::ExecTimeFull, Schema::EnergyFull})
        {
            if (to_string(s) == name)
                return s;
        }
        throw SchemaMismatch("unknown schema: " + std::string(name));
    }

    Features features_of(const TelemetryRecord &rec)
    {
        return Features{rec.cpu_utilization, rec.mobility_m,     rec.net_comm_s, rec.response_time_s,
                        rec.power_available, rec.energy_usage_j, rec.exec_time_s};
    }

    std::array<double, max_arity> design_row(Schema schema, const Features &f)
    {
        const double last = schema == Schema::EnergyFull ? f.exec_time_s : f.energy_usage_j;
        if (schema == Schema::ExecTimeBase)
            return {f.cpu_utilization, f.mobility_m, f.net_comm_s, f.response_time_s, 0.0, 0.0};
        return {f.cpu_utilization, f.mobility_m, f.net_comm_s, f.response_time_s, f.power_available, last};
    }

    double target_of(Schema schema, const TelemetryRecord &rec)
    {
        return schema == Schema::EnergyFull ? rec.energy_consumed_j : rec.exec_time_s;
    }

    TrainingWindow::TrainingWindow(std::size_t capacity) : capacity_(capacity)
    {
        if (capacity_ == 0)
            throw InvalidParameter("training window capacity must be > 0");
    }

    void TrainingWindow::push(const TelemetryRecord &rec)
    {
        if (records_.size() == capacity_)
            records_.pop_front();
        records_.push_back(rec);
    }

    namespace
    {
        // Column-major dense matrix, just enough for the least-squares solve.
        struct Matrix
        {
            std::size_t rows = 0;
            std::size_t cols = 0;
            std::vector<double> data;

            Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
            double &operator()(std::size_t i, std::size_t j) { return data[j * rows + i]; }
            double operator()(std::size_t i, std::size_t j) const { return data[j * rows + i]; }
        };

        // Householder QR with column pivoting. Returns the solution of
        // min ||A x - b||, with A's columns already equilibrated.
        std::vector<double> solve_qr(Matrix a, std::vector<double> b, double tolerance)
        {
            const std::size_t n = a.rows;
            const std::size_t m = a.cols;
            std::vector<std::size_t> perm(m);
            std::iota(perm.begin(), perm.end(), 0);
            std::vector<double> diag(m, 0.0);

            for (std::size_t k = 0; k < m; ++k)
            {
                // Pivot on the largest remaining column norm.
                std::size_t best = k;
                double best_norm = -1.0;
                for (std::size_t j = k; j < m; ++j)
                {
                    double s = 0.0;
                    for (std::size_t i = k; i < n; ++i)
                        s += a(i, j) * a(i, j);
                    if (s > best_norm)
                    {
                        best_norm = s;
                        best = j;
                    }
                }
                if (best != k)
                {
                    for (std::size_t i = 0; i < n; ++i)
                        std::swap(a(i, k), a(i, best));
                    std::swap(perm[k], perm[best]);
                }

                const double norm = std::sqrt(best_norm);
                const double alpha = a(k, k) > 0.0 ? -norm : norm;
                diag[k] = alpha;
                if (std::abs(alpha) <= tolerance * std::abs(diag[0]) || norm == 0.0)
                    throw RankDeficient("design matrix is rank deficient (column " + std::to_string(perm[k]) + ")");

                std::vector<double> v(n - k);
                for (std::size_t i = k; i < n; ++i)
                    v[i - k] = a(i, k);
                v[0] -= alpha;
                const double vnorm2 = std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
                if (vnorm2 == 0.0)
                    continue;

                for (std::size_t j = k; j < m; ++j)
                {
                    double dot = 0.0;
                    for (std::size_t i = k; i < n; ++i)
                        dot += v[i - k] * a(i, j);
                    const double f = 2.0 * dot / vnorm2;
                    for (std::size_t i = k; i < n; ++i)
                        a(i, j) -= f * v[i - k];
                }
                double dot = 0.0;
                for (std::size_t i = k; i < n; ++i)
                    dot += v[i - k] * b[i];
                const double f = 2.0 * dot / vnorm2;
                for (std::size_t i = k; i < n; ++i)
                    b[i] -= f * v[i - k];
            }

            std::vector<double> z(m, 0.0);
            for (std::size_t kk = m; kk-- > 0;)
            {
                double s = b[kk];
                for (std::size_t j = kk + 1; j < m; ++j)
                    s -= a(kk, j) * z[j];
                z[kk] = s / a(kk, kk);
            }
            std::vector<double> x(m, 0.0);
            for (std::size_t k = 0; k < m; ++k)
                x[perm[k]] = z[k];
            return x;
        }

        RegressionModel fit_rows(const std::vector<std::array<double, max_arity>> &rows, const std::vector<double> &y,
                                 Schema schema, const FitOptions &options)
        {
            const std::size_t n = rows.size();
            const std::size_t p = arity(schema);
            if (n < p + 1)
                throw InsufficientData("need at least " + std::to_string(p + 1) + " records, have " +
                                       std::to_string(n));

            for (std::size_t i = 0; i < n; ++i)
            {
                for (std::size_t j = 0; j < p; ++j)
                {
                    if (!std::isfinite(rows[i][j]))
                        throw InvalidParameter("non-finite predictor value");
                }
                if (!std::isfinite(y[i]))
                    throw InvalidParameter("non-finite target value");
            }

            RegressionModel model;
            model.schema = schema;
            model.coefficients.assign(p, 0.0);
            model.n_observations = n;

            std::vector<std::size_t> active;
            for (std::size_t j = 0; j < p; ++j)
            {
                if (options.pin_constant_columns)
                {
                    const bool constant = std::all_of(rows.begin(), rows.end(),
                                                      [&](const auto &r) { return r[j] == rows.front()[j]; });
                    if (constant)
                    {
                        model.pinned_mask |= 1u << j;
                        continue;
                    }
                }
                active.push_back(j);
            }
            if (active.empty())
                throw RankDeficient("every predictor is constant over the window");

            // Column 0 is the intercept; columns are scaled to unit norm.
            const std::size_t m = active.size() + 1;
            Matrix a(n, m);
            for (std::size_t i = 0; i < n; ++i)
            {
                a(i, 0) = 1.0;
                for (std::size_t c = 0; c < active.size(); ++c)
                    a(i, c + 1) = rows[i][active[c]];
            }
            std::vector<double> scale(m, 1.0);
            for (std::size_t j = 0; j < m; ++j)
            {
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    s += a(i, j) * a(i, j);
                s = std::sqrt(s);
                if (s == 0.0)
                    throw RankDeficient("predictor column is identically zero");
                scale[j] = s;
                for (std::size_t i = 0; i < n; ++i)
                    a(i, j) /= s;
            }

            auto x = solve_qr(a, y, options.rank_tolerance);
            for (std::size_t j = 0; j < m; ++j)
                x[j] /= scale[j];

            model.intercept = x[0];
            for (std::size_t c = 0; c < active.size(); ++c)
                model.coefficients[active[c]] = x[c + 1];

            double sse = 0.0;
            for (std::size_t i = 0; i < n; ++i)
            {
                double pred = model.intercept;
                for (std::size_t j = 0; j < p; ++j)
                    pred += model.coefficients[j] * rows[i][j];
                const double r = y[i] - pred;
                sse += r * r;
            }
            const std::size_t dof = n - active.size() - 1;
            model.residual_rmse = dof > 0 ? std::sqrt(sse / static_cast<double>(dof)) : 0.0;
            return model;
        }
    } // namespace

    RegressionModel fit(std::span<const TelemetryRecord> records, Schema schema, const FitOptions &options)
    {
        std::vector<std::array<double, max_arity>> rows;
        std::vector<double> y;
        rows.reserve(records.size());
        y.reserve(records.size());
        for (const auto &rec : records)
        {
            rows.push_back(design_row(schema, features_of(rec)));
            y.push_back(target_of(schema, rec));
        }
        return fit_rows(rows, y, schema, options);
    }

    RegressionModel fit(const TrainingWindow &window, Schema schema, const FitOptions &options)
    {
        const std::vector<TelemetryRecord> snapshot(window.records().begin(), window.records().end());
        return fit(snapshot, schema, options);
    }

    double evaluate(const RegressionModel &model, const Features &f)
    {
        const std::size_t p = arity(model.schema);
        if (model.coefficients.size() != p)
            throw SchemaMismatch("model has " + std::to_string(model.coefficients.size()) +
                                 " coefficients, schema expects " + std::to_string(p));
        const auto row = design_row(model.schema, f);
        double y = model.intercept;
        for (std::size_t j = 0; j < p; ++j)
        {
            if (!std::isfinite(row[j]))
                throw InvalidParameter("non-finite feature value");
            y += model.coefficients[j] * row[j];
        }
        return y;
    }

    double predict_exec_time(const RegressionModel &model, const Features &f)
    {
        if (model.schema == Schema::EnergyFull)
            throw SchemaMismatch("execution-time prediction needs an exec-time schema");
        return std::max(epsilon_time_s, evaluate(model, f));
    }

    double predict_energy(const RegressionModel &model, const Features &f)
    {
        if (model.schema != Schema::EnergyFull)
            throw SchemaMismatch("energy prediction needs the EnergyFull schema");
        return std::max(epsilon_energy_j, evaluate(model, f));
    }

    RegressionModel cold_start_model(Schema schema, std::span<const FogDevice> devices, double task_length_mi)
    {
        RegressionModel model;
        model.schema = schema;
        model.coefficients.assign(arity(schema), 0.0);
        if (devices.empty())
            return model;

        const double count = static_cast<double>(devices.size());
        if (schema == Schema::EnergyFull)
        {
            double idle = 0.0;
            for (const auto &d : devices)
                idle += d.power_idle_w;
            model.coefficients[5] = idle / count;
        }
        else
        {
            double mips = 0.0;
            for (const auto &d : devices)
                mips += d.mips_capacity;
            model.coefficients[0] = task_length_mi / (mips / count);
        }
        return model;
    }

    std::string models_to_csv(std::span<const RegressionModel> models)
    {
        std::string out = "schema";
        for (std::size_t j = 0; j <= max_arity; ++j)
            out += ",beta" + std::to_string(j);
        out += ",rmse,n\n";
        for (const auto &m : models)
        {
            out += to_string(m.schema);
            out += ',';
            out += format_double(m.intercept);
            for (std::size_t j = 0; j < max_arity; ++j)
            {
                out += ',';
                if (j < m.coefficients.size())
                    out += format_double(m.coefficients[j]);
            }
            out += ',';
            out += format_double(m.residual_rmse);
            out += ',';
            out += std::to_string(m.n_observations);
            out += '\n';
        }
        return out;
    }

} // namespace fogsim
