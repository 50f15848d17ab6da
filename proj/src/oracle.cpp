#include "scj/oracle.hpp"

#include <algorithm>

namespace scj {

std::vector<std::pair<Oid, Oid>> brute_force_join(const Collection& left,
                                                  const Collection& right) {
    std::vector<std::pair<Oid, Oid>> pairs;
    for (const SetObject& r : left.objects) {
        for (const SetObject& s : right.objects) {
            if (r.size() > s.size()) continue;
            if (std::includes(s.items.begin(), s.items.end(), r.items.begin(), r.items.end())) {
                pairs.emplace_back(r.oid, s.oid);
            }
        }
    }
    return pairs;
}

}  // namespace scj
