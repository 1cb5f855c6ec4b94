#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spinorbit {

// Exit-code classes used by the command line front-end.
enum class ErrorClass { config = 2, data = 3, numerical = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

struct ZeroNorm : Error {
  explicit ZeroNorm(const std::string& what) : Error(ErrorClass::numerical, "zero norm: " + what) {}
};

struct OamOverflow : Error {
  OamOverflow(int oam, int m_max)
      : Error(ErrorClass::numerical, "OAM " + std::to_string(oam) + " exceeds truncation m_max = " +
                                         std::to_string(m_max)),
        oam(oam),
        m_max(m_max) {}
  int oam;
  int m_max;
};

struct DomainError : Error {
  explicit DomainError(const std::string& what) : Error(ErrorClass::numerical, what) {}
};

struct SettingMismatch : Error {
  explicit SettingMismatch(const std::string& what) : Error(ErrorClass::data, "setting mismatch: " + what) {}
};

struct ZeroCounts : Error {
  explicit ZeroCounts(const std::string& what) : Error(ErrorClass::data, "zero counts: " + what) {}
};

struct InsufficientData : Error {
  explicit InsufficientData(const std::string& what) : Error(ErrorClass::data, "insufficient data: " + what) {}
};

// Angle pairs (theta, chi) in radians that a computation needed but did not find.
struct MissingSetting : Error {
  explicit MissingSetting(std::vector<std::pair<double, double>> absent);
  std::vector<std::pair<double, double>> absent;
};

struct DataError : Error {
  explicit DataError(const std::string& what) : Error(ErrorClass::data, what) {}
};

struct ConfigError : Error {
  ConfigError(std::string key, const std::string& what)
      : Error(ErrorClass::config, key.empty() ? what : "config key '" + key + "': " + what), key(std::move(key)) {}
  std::string key;
};

}  // namespace spinorbit
