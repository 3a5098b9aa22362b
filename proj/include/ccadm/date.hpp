#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace ccadm {

/// A calendar day. Text form is ISO-8601 `YYYY-MM-DD`.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}
  constexpr Date(int year, unsigned month, unsigned day)
      : days_(std::chrono::year_month_day{std::chrono::year{year}, std::chrono::month{month},
                                          std::chrono::day{day}}) {}

  /// Strict `YYYY-MM-DD`; returns nullopt for anything else, including
  /// impossible days such as 2017-02-29.
  static std::optional<Date> parse(std::string_view text);

  static constexpr Date from_serial(long serial) {
    return Date(std::chrono::sys_days{std::chrono::days{serial}});
  }

  constexpr long serial() const { return static_cast<long>(days_.time_since_epoch().count()); }
  constexpr std::chrono::sys_days days() const { return days_; }

  std::string iso() const;

  constexpr Date operator+(int n) const { return Date(days_ + std::chrono::days{n}); }

  friend constexpr auto operator<=>(const Date&, const Date&) = default;
  friend constexpr bool operator==(const Date&, const Date&) = default;

 private:
  std::chrono::sys_days days_{};
};

}  // namespace ccadm
