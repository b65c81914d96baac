// Independence of the cube projections versus tameness of monotone families.

#include <iostream>

#include "ordnung/gallery.hpp"
#include "ordnung/tameness.hpp"

int main() {
    const auto cube = ordnung::gen_cantor_projections(3);
    std::vector<std::size_t> all = {0, 1, 2};
    const auto outcome = ordnung::independence_at(cube, all, 0.25, 0.75);
    std::cout << "cube projections independent: " << (outcome.independent() ? "yes" : "no")
              << "\n";

    const auto monotone = ordnung::gen_random_monotone(10, 8, 42);
    const auto pair = ordnung::independence_search(monotone, 2);
    std::cout << "independent pair among 10 random increasing functions: "
              << (pair ? "found" : "none") << "\n";

    auto [k, witness] = ordnung::max_independent_size(cube);
    std::cout << "largest independent subfamily of the cube: " << k << "\n";
    return 0;
}
