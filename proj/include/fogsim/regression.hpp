#pragma once

// Multiple linear regression predictors for execution time and energy.
//
// Three predictor schemas are supported:
//
//   ExecTimeBase  exec ~ cpu + mobility + netcomm + resptime
//   ExecTimeFull  exec ~ cpu + mobility + netcomm + resptime + power_avail + energy_usage
//   EnergyFull    energy ~ cpu + mobility + netcomm + resptime + power_avail + exec_time
//
// Coefficients are fitted by ordinary least squares over a sliding window of
// telemetry records.

#include "fogsim/domain.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fogsim
{
    enum class Schema : std::uint8_t
    {
        ExecTimeBase = 0,
        ExecTimeFull = 1,
        EnergyFull = 2,
    };

    std::size_t arity(Schema s) noexcept;
    std::string_view to_string(Schema s);
    Schema parse_schema(std::string_view name);

    inline constexpr std::size_t max_arity = 6;
    inline constexpr double epsilon_time_s = 1e-3;
    inline constexpr double epsilon_energy_j = 1e-3;

    /// Candidate-device predictors. `exec_time_s` is only read by EnergyFull,
    /// `power_available` and `energy_usage_j` only by the Full schemas.
    struct Features
    {
        double cpu_utilization = 0.0;
        double mobility_m = 0.0;
        double net_comm_s = 0.0;
        double response_time_s = 0.0;
        double power_available = 1.0;
        double energy_usage_j = 0.0;
        double exec_time_s = 0.0;
    };

    Features features_of(const TelemetryRecord &rec);

    /// Predictor values in schema order; only the first arity(schema) entries are used.
    std::array<double, max_arity> design_row(Schema schema, const Features &f);

    /// Regression target of `rec` under `schema`.
    double target_of(Schema schema, const TelemetryRecord &rec);

    struct RegressionModel
    {
        Schema schema = Schema::ExecTimeFull;
        double intercept = 0.0;
        std::vector<double> coefficients; // arity(schema) entries
        double residual_rmse = 0.0;
        std::size_t n_observations = 0;
        std::uint32_t pinned_mask = 0; // bit i set: predictor i was constant and pinned to 0

        bool operator==(const RegressionModel &) const = default;
    };

    class InsufficientData : public Error
    {
    public:
        using Error::Error;
    };

    class RankDeficient : public Error
    {
    public:
        using Error::Error;
    };

    class SchemaMismatch : public Error
    {
    public:
        using Error::Error;
    };

    class TrainingWindow
    {
    public:
        explicit TrainingWindow(std::size_t capacity = 500);

        void push(const TelemetryRecord &rec);
        std::size_t size() const noexcept { return records_.size(); }
        std::size_t capacity() const noexcept { return capacity_; }
        const std::deque<TelemetryRecord> &records() const noexcept { return records_; }

    private:
        std::size_t capacity_;
        std::deque<TelemetryRecord> records_;
    };

    struct FitOptions
    {
        /// Pivot magnitude below tolerance x largest pivot flags rank deficiency.
        double rank_tolerance = 1e-10;

        /// When set, predictors that are constant over the window are dropped
        /// from the design and get coefficient 0 instead of raising
        /// RankDeficient; the intercept absorbs their value.
        bool pin_constant_columns = false;
    };

    RegressionModel fit(std::span<const TelemetryRecord> records, Schema schema, const FitOptions &options = {});
    RegressionModel fit(const TrainingWindow &window, Schema schema, const FitOptions &options = {});

    /// Raw affine evaluation, no clamp. Throws SchemaMismatch on a malformed model.
    double evaluate(const RegressionModel &model, const Features &f);

    /// Clamped below at epsilon_time_s. Requires an exec-time schema.
    double predict_exec_time(const RegressionModel &model, const Features &f);

    /// Clamped below at epsilon_energy_j. Requires the EnergyFull schema.
    double predict_energy(const RegressionModel &model, const Features &f);

    /// Bootstrap model used until telemetry accumulates. Exec-time schemas put
    /// task_length_mi / mean(MIPS) on CPU utilization, EnergyFull puts
    /// mean(idle power) on exec time; everything else is zero.
    RegressionModel cold_start_model(Schema schema, std::span<const FogDevice> devices, double task_length_mi);

    /// CSV with header `schema,beta0,beta1,...,beta6,rmse,n`; short schemas leave trailing betas empty.
    std::string models_to_csv(std::span<const RegressionModel> models);

} // namespace fogsim
