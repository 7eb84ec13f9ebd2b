#ifndef METACOMP_KEYS_HPP
#define METACOMP_KEYS_HPP

#include "metacomp/env.hpp"

namespace metacomp::keys {

// Published by every framework template.
inline const EnvKey iteration{"framework", "iteration"};
inline const EnvKey evaluations{"framework", "evaluations"};
inline const EnvKey incumbent_value{"framework", "incumbent_value"};
inline const EnvKey incoming_value{"framework", "incoming_value"};
inline const EnvKey best_value{"framework", "best_value"};

// Published by instantiation for the problem being solved (optional reads).
inline const EnvKey problem_bounds{"problem", "bounds"};

inline const EnvKey sa_temperature{"sa", "temperature"};
inline const EnvKey tabu_list{"tabu", "list"};

inline const EnvKey ga_pop_size{"ga", "pop_size"};
inline const EnvKey ga_tournament_size{"ga", "tournament_size"};

/// Namespaces any component may read without declaring them.
inline bool ambient_namespace(const EnvKey& k) { return k.ns() == "framework" || k.ns() == "problem"; }

}  // namespace metacomp::keys

#endif  // METACOMP_KEYS_HPP
