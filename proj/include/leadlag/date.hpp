#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace leadlag {

/// Calendar day. Arithmetic is in whole days only.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::chrono::sys_days d) : days_(d) {}
    constexpr Date(int y, unsigned m, unsigned d)
        : days_(std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}}) {}

    [[nodiscard]] constexpr std::chrono::sys_days sys() const { return days_; }

    /// Days since 1970-01-01.
    [[nodiscard]] constexpr long serial() const { return days_.time_since_epoch().count(); }

    [[nodiscard]] std::string iso() const;

    constexpr Date operator+(long n) const { return Date{days_ + std::chrono::days{n}}; }
    constexpr Date operator-(long n) const { return Date{days_ - std::chrono::days{n}}; }
    constexpr long operator-(Date other) const { return (days_ - other.days_).count(); }

    constexpr auto operator<=>(const Date&) const = default;

private:
    std::chrono::sys_days days_{};
};

/// Strict YYYY-MM-DD parser. Returns nullopt on any malformed or impossible date.
[[nodiscard]] std::optional<Date> parse_iso_date(std::string_view text);

} // namespace leadlag
