#include <iostream>

#include "rbp/cli.hpp"

int main(int argc, char** argv)
{
    return rbp::parse_and_dispatch(argc, argv, std::cout, std::cerr);
}
