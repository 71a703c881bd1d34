#pragma once

#include <vector>

namespace rr {

class DiscountCurve;

/// Tenor dates T0 < T1 < ... < TN with T0 > 0 and N >= 1.
class TenorSchedule {
public:
    explicit TenorSchedule(std::vector<double> dates);

    const std::vector<double>& dates() const noexcept { return dates_; }
    /// Number of accrual periods N.
    std::size_t periods() const noexcept { return dates_.size() - 1; }
    double date(std::size_t k) const { return dates_.at(k); }
    double first() const noexcept { return dates_.front(); }
    double last() const noexcept { return dates_.back(); }
    /// delta_i = T_i - T_{i-1}, i in [1, N].
    double accrual(std::size_t i) const;

    /// Throws DomainError when the last date exceeds the curve horizon.
    void check_horizon(const DiscountCurve& curve) const;

private:
    std::vector<double> dates_;
};

/// Sum_{i=1}^N P0(T_i) delta_i.
double annuity(const DiscountCurve& curve, const TenorSchedule& schedule);

} // namespace rr
