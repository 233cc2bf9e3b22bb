#ifndef DECOPT_ACCEPTANCE_HPP
#define DECOPT_ACCEPTANCE_HPP

#include <ostream>

namespace decopt {

// Runs the full scaling-law acceptance suite, printing one
// "[PASS]"/"[FAIL]" line per criterion. Returns the number of failures.
int run_acceptance(std::ostream& out);

}  // namespace decopt

#endif
