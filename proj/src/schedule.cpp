#include "rr/schedule.hpp"

#include <cmath>
#include <string>

#include "rr/curve.hpp"
#include "rr/errors.hpp"

namespace rr {

TenorSchedule::TenorSchedule(std::vector<double> dates)
    : dates_(std::move(dates))
{
    if (dates_.size() < 2) {
        throw ValidationError("schedule needs at least two dates (T0 < T1)");
    }
    if (!(dates_.front() > 0.0)) {
        throw ValidationError("schedule requires T0 > 0");
    }
    for (std::size_t k = 0; k < dates_.size(); ++k) {
        if (!std::isfinite(dates_[k])) throw ValidationError("schedule date is not finite");
        if (k > 0 && !(dates_[k] > dates_[k - 1])) {
            throw ValidationError("schedule dates must be strictly increasing (T" +
                                  std::to_string(k - 1) + " = " + std::to_string(dates_[k - 1]) +
                                  ", T" + std::to_string(k) + " = " + std::to_string(dates_[k]) + ")");
        }
    }
}

double TenorSchedule::accrual(std::size_t i) const
{
    if (i == 0 || i >= dates_.size()) {
        throw DomainError("accrual period " + std::to_string(i) + " out of range");
    }
    return dates_[i] - dates_[i - 1];
}

void TenorSchedule::check_horizon(const DiscountCurve& curve) const
{
    if (dates_.back() > curve.horizon()) {
        throw DomainError("schedule ends at " + std::to_string(dates_.back()) +
                          " beyond curve horizon " + std::to_string(curve.horizon()));
    }
}

double annuity(const DiscountCurve& curve, const TenorSchedule& schedule)
{
    double acc = 0.0;
    for (std::size_t i = 1; i <= schedule.periods(); ++i) {
        acc += curve.bond_price(schedule.date(i)) * schedule.accrual(i);
    }
    return acc;
}

} // namespace rr
