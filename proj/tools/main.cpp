#include "singfde/cli.hpp"

int main(int argc, char** argv)
{
    return singfde::cli::run(argc, argv);
}
