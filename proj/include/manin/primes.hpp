#pragma once

#include <cstdint>
#include <vector>

namespace manin {

// All primes p <= limit, ascending (simple Eratosthenes sieve).
std::vector<std::uint32_t> primes_up_to(std::uint64_t limit);

bool is_prime(std::uint64_t n);

}  // namespace manin
