#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace walkdist {

// Error taxonomy. The CLI maps these onto process exit codes:
//   config_error / domain_error / capability_error -> 2
//   numeric_error                                  -> 3
//   resource_error                                 -> 4
class error : public std::runtime_error {
public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent user input (configs, flags, file references).
class config_error : public error {
public:
  using error::error;
};

// Structurally invalid mathematical input: mixed-group products, empty
// graphs, non-generating sets, invalid moduli.
class domain_error : public error {
public:
  using error::error;
};

// An iterative routine failed to meet its tolerance within its step cap,
// or numeric output contradicts an exact invariant.
class numeric_error : public error {
public:
  using error::error;
};

// A size cap was exceeded (element count, state-space size, iteration
// budget tied to memory).
class resource_error : public error {
public:
  using error::error;
};

// The requested operation is not available for this input family; the
// message names the supported alternative route.
class capability_error : public error {
public:
  using error::error;
};

// Generating-set failure: carries the order of the proper subgroup found.
class generation_error : public domain_error {
public:
  generation_error(const std::string& what, std::uint64_t subgroup_order)
      : domain_error(what), subgroup_order(subgroup_order) {}
  std::uint64_t subgroup_order;
};

// Pair-product pathology: S^{-1}S generates a proper (index-2) subgroup.
class index_two_error : public domain_error {
public:
  index_two_error(const std::string& what, std::uint64_t subgroup_order,
                  std::uint64_t group_order)
      : domain_error(what),
        subgroup_order(subgroup_order),
        group_order(group_order) {}
  std::uint64_t subgroup_order;
  std::uint64_t group_order;
};

}  // namespace walkdist
