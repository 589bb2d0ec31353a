#include "fogsim/alloc.hpp"

#include <algorithm>
#include <limits>

namespace fogsim
{
    std::vector<Score> score_all(std::span<const Candidate> candidates, const ModelSet &models)
    {
        if (candidates.empty())
            throw NoDevices();
        std::vector<Score> scores;
        scores.reserve(candidates.size());
        for (const auto &c : candidates)
        {
            Features f = c.features;
            const double etp = predict_exec_time(models.exec_time, f);
            f.exec_time_s = etp;
            const double eec = predict_energy(models.energy, f);
            scores.push_back(Score{c.device.id, etp, eec});
        }
        return scores;
    }

    namespace
    {
        template <typename Key>
        DeviceId argmin_by(std::span<const Score> scores, Key key)
        {
            if (scores.empty())
                throw NoDevices();
            const Score *best = &scores.front();
            double best_val = key(*best);
            for (const auto &s : scores.subspan(1))
            {
                const double v = key(s);
                if (v < best_val || (v == best_val && s.device_id < best->device_id))
                {
                    best = &s;
                    best_val = v;
                }
            }
            return best->device_id;
        }

        std::vector<double> minmax_normalize(std::span<const Score> scores, double Score::*field)
        {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (const auto &s : scores)
            {
                lo = std::min(lo, s.*field);
                hi = std::max(hi, s.*field);
            }
            std::vector<double> out(scores.size(), 0.0);
            if (hi > lo)
            {
                for (std::size_t i = 0; i < scores.size(); ++i)
                    out[i] = (scores[i].*field - lo) / (hi - lo);
            }
            return out;
        }

        const Score &score_of(std::span<const Score> scores, DeviceId id)
        {
            return *std::find_if(scores.begin(), scores.end(), [id](const Score &s) { return s.device_id == id; });
        }
    } // namespace

    DeviceId select_deadline(std::span<const Score> scores)
    {
        return argmin_by(scores, [](const Score &s) { return s.etp_s; });
    }

    DeviceId select_energy(std::span<const Score> scores)
    {
        return argmin_by(scores, [](const Score &s) { return s.eec_j; });
    }

    DeviceId select_hybrid(std::span<const Score> scores, double weight)
    {
        if (scores.empty())
            throw NoDevices();
        if (!(weight >= 0.0 && weight <= 1.0))
            throw InvalidParameter("hybrid weight must lie in [0,1]");

        const auto etp = minmax_normalize(scores, &Score::etp_s);
        const auto eec = minmax_normalize(scores, &Score::eec_j);
        std::vector<Score> combined(scores.begin(), scores.end());
        for (std::size_t i = 0; i < combined.size(); ++i)
            combined[i].etp_s = weight * etp[i] + (1.0 - weight) * eec[i];
        return select_deadline(combined);
    }

    int predicted_power_available(const Candidate &c, const ModelSet &models, double safety_margin)
    {
        Features f = c.features;
        f.power_available = 1.0;
        const double etp = predict_exec_time(models.exec_time, f);
        const double power = power_at(PowerModel::of(c.device), std::clamp(c.current_utilization, 0.0, 1.0));
        return power_available(c.device, etp, power, safety_margin);
    }

    AllocationDecision allocate(std::span<const Candidate> candidates, const ApplicationRequest &app,
                                const ModelSet &models, const AllocationOptions &options, double now_s)
    {
        if (candidates.empty())
            throw NoDevices();

        AllocationDecision decision;
        decision.app_id = app.app_id;
        decision.decided_at_s = now_s;
        decision.policy = static_cast<Policy>(app.requirement);

        switch (app.requirement)
        {
        case Requirement::DeadlineAware:
        case Requirement::EnergyAware:
        case Requirement::Hybrid:
            break;
        default:
            decision.known_requirement = false;
            return decision;
        }

        std::vector<Candidate> flagged(candidates.begin(), candidates.end());
        std::vector<Candidate> usable;
        for (auto &c : flagged)
        {
            c.features.power_available = predicted_power_available(c, models, options.safety_margin);
            if (c.features.power_available == 1.0)
                usable.push_back(c);
        }
        if (usable.empty())
        {
            usable = flagged;
            decision.filtered_fallback = true;
        }

        const auto scores = score_all(usable, models);
        DeviceId chosen = 0;
        switch (app.requirement)
        {
        case Requirement::DeadlineAware:
            chosen = select_deadline(scores);
            break;
        case Requirement::EnergyAware:
            chosen = select_energy(scores);
            break;
        case Requirement::Hybrid:
            chosen = select_hybrid(scores, options.hybrid_weight);
            break;
        }

        const auto &s = score_of(scores, chosen);
        decision.chosen_device_id = chosen;
        decision.predicted_exec_s = s.etp_s;
        decision.predicted_energy_j = s.eec_j;
        return decision;
    }

    AllocationDecision baseline_power_min(std::span<const Candidate> candidates, const ApplicationRequest &app,
                                          double now_s)
    {
        if (candidates.empty())
            throw NoDevices();
        std::vector<Score> draw;
        draw.reserve(candidates.size());
        for (const auto &c : candidates)
        {
            const double p = power_at(PowerModel::of(c.device), std::clamp(c.current_utilization, 0.0, 1.0));
            draw.push_back(Score{c.device.id, p, p});
        }

        AllocationDecision decision;
        decision.app_id = app.app_id;
        decision.decided_at_s = now_s;
        decision.policy = Policy::BaselinePowerMin;
        decision.chosen_device_id = select_deadline(draw);
        return decision;
    }

} // namespace fogsim
