#pragma once

#include <cstddef>
#include <cstdint>

#include "idsbed/record.hpp"

namespace idsbed {

/// What one component stream produces on one tick.
struct Emitted {
  DataCategory category = DataCategory::Gaussian;
  Payload payload = ScalarPayload{};
  Label label = Label::Normal;
};

/// A client component exposes one or more periodic streams. Streams of the
/// same component share state and are always driven from one thread.
class Component {
 public:
  virtual ~Component() = default;

  virtual std::size_t stream_count() const = 0;
  /// Period of a stream in ms; 0 disables the stream.
  virtual std::int64_t period_ms(std::size_t stream) const = 0;
  virtual Emitted emit(std::size_t stream, std::int64_t vtime_ms) = 0;
};

}  // namespace idsbed
